#ifndef SDC_ADJOINT_H
#define SDC_ADJOINT_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(SDCA_BUILDING_LIBRARY)
#    define SDCA_API __declspec(dllexport)
#  else
#    define SDCA_API __declspec(dllimport)
#  endif
#else
#  define SDCA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct sdca_problem sdca_problem;
typedef struct sdca_trace sdca_trace;

typedef enum {
  SDCA_OK = 0,
  SDCA_INVALID_ARGUMENT = 1,
  SDCA_ITERATION_FAILURE = 2,
  SDCA_NUMERICAL_FAILURE = 3,
  SDCA_REFERENCE_UNRELIABLE = 4,
  SDCA_DEGENERATE_RATIO = 5,
  SDCA_INTERNAL = 6
} sdca_status;

typedef enum { SDCA_EXPLICIT = 0, SDCA_IMPLICIT = 1 } sdca_mode;

typedef enum {
  SDCA_ACTION_NONE = 0,
  SDCA_ACTION_HALVE_DT = 1,
  SDCA_ACTION_INC_M = 2,
  SDCA_ACTION_INC_K = 3
} sdca_action;

/* Zero in an optional field means "use the default". */
typedef struct {
  int N;
  int M;
  int K;
  sdca_mode mode;
  int degree;             /* q; 0 selects it from dt, M, K */
  int compute_exact;      /* nonzero: fill exact_error / effectivity */
  int quadrature_points;  /* 0: automatic */
  int adjoint_refinement; /* adjoint intervals per forward interval; 0 -> 2 */
  int adjoint_M;          /* 0: forward M */
  int adjoint_K;          /* 0: forward K */
  int adjoint_degree;     /* 0: automatic */
} sdca_params;

typedef struct {
  double estimate;
  double E_D;
  double E_M;
  double E_K;
  int has_exact;
  double exact_error;
  int has_effectivity;
  double effectivity;
  int exact_from_reference;
  double dt;
  int N;
  int M;
  int K;
  int q;
  int q_adjoint;
  sdca_mode mode;
} sdca_report;

typedef struct {
  double estimate;
  double dt;
  int N;
  int M;
  int K;
  double E_D;
  double E_M;
  double E_K;
  sdca_action action; /* NONE on the last row */
} sdca_adapt_row;

/* N=1, M=3, K=2, explicit, everything else automatic, exact error on. */
SDCA_API void sdca_params_init(sdca_params* params);

/* Built-in benchmarks: "harmonic", "vinograd", "two_body", "heat".
 * qoi may be NULL for the problem's default; final_time <= 0 keeps the
 * problem's own T. */
SDCA_API sdca_status sdca_problem_builtin(const char* name, const char* qoi, double final_time,
                                          sdca_problem** out);
/* Linear problem from a config file. final_time <= 0 keeps the file's T. */
SDCA_API sdca_status sdca_problem_from_config(const char* path, double final_time,
                                              sdca_problem** out);
SDCA_API void sdca_problem_free(sdca_problem* problem);
SDCA_API double sdca_problem_final_time(const sdca_problem* problem);
SDCA_API int sdca_problem_dimension(const sdca_problem* problem);

/* Comma-separated QoI names accepted by sdca_problem_builtin for `name`,
 * default first. NULL for an unknown problem. */
SDCA_API const char* sdca_builtin_qois(const char* name);

/* Forward solve, reconstruction, adjoint solve and error estimate. */
SDCA_API sdca_status sdca_run(const sdca_problem* problem, const sdca_params* params,
                              sdca_report* out);

/* Largest nodal |Y| of the SDC solution alone (no estimate); +inf when the
 * solution is non-finite. */
SDCA_API sdca_status sdca_solution_max_norm(const sdca_problem* problem, const sdca_params* params,
                                            double* out);

/* Adaptive refinement until |estimate| <= tol or max_steps estimates. */
SDCA_API sdca_status sdca_adapt(const sdca_problem* problem, const sdca_params* params, double tol,
                                int max_steps, sdca_trace** out);
SDCA_API size_t sdca_trace_size(const sdca_trace* trace);
SDCA_API int sdca_trace_incomplete(const sdca_trace* trace);
SDCA_API sdca_status sdca_trace_row(const sdca_trace* trace, size_t index, sdca_adapt_row* out);
SDCA_API void sdca_trace_free(sdca_trace* trace);

SDCA_API const char* sdca_action_name(sdca_action action);

/* Message for the last failure on the calling thread; "" if none. */
SDCA_API const char* sdca_last_error(void);
SDCA_API const char* sdca_version(void);

#ifdef __cplusplus
}
#endif

#endif
