#include "sdc_adjoint.h"

#include <cmath>
#include <exception>
#include <string>
#include <string_view>

#include "sdcadj/adapt.hpp"
#include "sdcadj/errors.hpp"
#include "sdcadj/estimator.hpp"
#include "sdcadj/problems.hpp"
#include "sdcadj/sdc.hpp"

struct sdca_problem {
  sdcadj::Benchmark benchmark;
};

struct sdca_trace {
  sdcadj::AdaptTrace trace;
};

namespace {

constexpr int kHeatNodes = 39;

thread_local std::string last_error;

sdca_status fail(sdca_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Maps the core exception hierarchy onto status codes.
template <class Fn>
sdca_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return SDCA_OK;
  } catch (const sdcadj::InvalidArgument& e) {
    return fail(SDCA_INVALID_ARGUMENT, e.what());
  } catch (const sdcadj::IterationFailure& e) {
    return fail(SDCA_ITERATION_FAILURE, e.what());
  } catch (const sdcadj::NumericalFailure& e) {
    return fail(SDCA_NUMERICAL_FAILURE, e.what());
  } catch (const sdcadj::ReferenceUnreliable& e) {
    return fail(SDCA_REFERENCE_UNRELIABLE, e.what());
  } catch (const sdcadj::DegenerateRatio& e) {
    return fail(SDCA_DEGENERATE_RATIO, e.what());
  } catch (const std::exception& e) {
    return fail(SDCA_INTERNAL, e.what());
  } catch (...) {
    return fail(SDCA_INTERNAL, "unknown error");
  }
}

sdcadj::Benchmark make_builtin(std::string_view name, std::string_view qoi, double final_time) {
  using namespace sdcadj;
  const bool keep_t = !(final_time > 0.0);
  auto with_time = [&](Benchmark b) {
    if (!keep_t) b.problem.final_time = final_time;
    return b;
  };
  if (name == "harmonic") {
    if (!qoi.empty() && qoi != "default") throw InvalidArgument("harmonic: unknown QoI");
    return with_time(harmonic_oscillator());
  }
  if (name == "vinograd") {
    if (!qoi.empty() && qoi != "default") throw InvalidArgument("vinograd: unknown QoI");
    return with_time(vinograd());
  }
  if (name == "two_body") {
    if (qoi.empty() || qoi == "default") return keep_t ? two_body() : two_body(final_time);
    if (qoi == "gaussian") return keep_t ? two_body_gaussian() : two_body_gaussian(final_time);
    throw InvalidArgument("two_body: unknown QoI");
  }
  if (name == "heat") {
    if (qoi.empty() || qoi == "terminal_sum") {
      return with_time(heat_equation(kHeatNodes, terminal_sum(kHeatNodes)));
    }
    if (qoi == "terminal_average") {
      return with_time(heat_equation(kHeatNodes, terminal_average(kHeatNodes)));
    }
    throw InvalidArgument("heat: unknown QoI");
  }
  throw InvalidArgument("unknown problem '" + std::string(name) + "'");
}

sdcadj::RunParams to_run_params(const sdca_params& p) {
  sdcadj::RunParams r;
  r.N = p.N;
  r.M = p.M;
  r.K = p.K;
  r.mode = p.mode == SDCA_IMPLICIT ? sdcadj::SdcMode::Implicit : sdcadj::SdcMode::Explicit;
  if (p.degree > 0) r.degree = p.degree;
  r.compute_exact = p.compute_exact != 0;
  if (p.quadrature_points > 0) r.quadrature_points = p.quadrature_points;
  if (p.adjoint_refinement > 0) r.adjoint.refinement = p.adjoint_refinement;
  if (p.adjoint_M > 0) r.adjoint.subintervals = p.adjoint_M;
  if (p.adjoint_K > 0) r.adjoint.iterations = p.adjoint_K;
  if (p.adjoint_degree > 0) r.adjoint.degree = p.adjoint_degree;
  return r;
}

sdca_action to_action(const std::optional<sdcadj::AdaptAction>& a) {
  if (!a) return SDCA_ACTION_NONE;
  switch (*a) {
    case sdcadj::AdaptAction::HalveDt:
      return SDCA_ACTION_HALVE_DT;
    case sdcadj::AdaptAction::IncrementM:
      return SDCA_ACTION_INC_M;
    case sdcadj::AdaptAction::IncrementK:
      return SDCA_ACTION_INC_K;
  }
  return SDCA_ACTION_NONE;
}

}  // namespace

extern "C" {

void sdca_params_init(sdca_params* params) {
  if (!params) return;
  *params = sdca_params{};
  params->N = 1;
  params->M = 3;
  params->K = 2;
  params->mode = SDCA_EXPLICIT;
  params->compute_exact = 1;
}

sdca_status sdca_problem_builtin(const char* name, const char* qoi, double final_time,
                                 sdca_problem** out) {
  if (!name || !out) return fail(SDCA_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto b = make_builtin(name, qoi ? qoi : "", final_time);
    *out = new sdca_problem{std::move(b)};
  });
}

sdca_status sdca_problem_from_config(const char* path, double final_time, sdca_problem** out) {
  if (!path || !out) return fail(SDCA_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto b = sdcadj::load_linear_config(path);
    if (final_time > 0.0) b.problem.final_time = final_time;
    *out = new sdca_problem{std::move(b)};
  });
}

void sdca_problem_free(sdca_problem* problem) { delete problem; }

double sdca_problem_final_time(const sdca_problem* problem) {
  return problem ? problem->benchmark.problem.final_time : 0.0;
}

int sdca_problem_dimension(const sdca_problem* problem) {
  return problem ? problem->benchmark.problem.dimension : 0;
}

const char* sdca_builtin_qois(const char* name) {
  if (!name) return nullptr;
  const std::string_view n(name);
  if (n == "harmonic" || n == "vinograd") return "default";
  if (n == "two_body") return "default,gaussian";
  if (n == "heat") return "terminal_sum,terminal_average";
  return nullptr;
}

sdca_status sdca_run(const sdca_problem* problem, const sdca_params* params, sdca_report* out) {
  if (!problem || !params || !out) return fail(SDCA_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& b = problem->benchmark;
    const sdcadj::ErrorReport r = sdcadj::run_estimate(b.problem, b.qoi, to_run_params(*params));
    sdca_report rep{};
    rep.estimate = r.estimate;
    rep.E_D = r.E_D;
    rep.E_M = r.E_M;
    rep.E_K = r.E_K;
    rep.has_exact = r.exact_error.has_value();
    rep.exact_error = r.exact_error.value_or(NAN);
    rep.has_effectivity = r.effectivity.has_value();
    rep.effectivity = r.effectivity.value_or(NAN);
    rep.exact_from_reference = r.exact_from_reference;
    rep.dt = r.dt;
    rep.N = r.N;
    rep.M = r.M;
    rep.K = r.K;
    rep.q = r.q;
    rep.q_adjoint = r.q_adjoint;
    rep.mode = r.mode == sdcadj::SdcMode::Implicit ? SDCA_IMPLICIT : SDCA_EXPLICIT;
    *out = rep;
  });
}

sdca_status sdca_solution_max_norm(const sdca_problem* problem, const sdca_params* params,
                                   double* out) {
  if (!problem || !params || !out) return fail(SDCA_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& p = problem->benchmark.problem;
    const sdcadj::RunParams r = to_run_params(*params);
    if (r.N < 1 || r.M < 1 || r.K < 1) {
      throw sdcadj::InvalidArgument("N, M and K must be positive");
    }
    const auto mesh = sdcadj::TimeMesh::uniform(p.final_time, r.N, r.M);
    *out = sdcadj::max_nodal_norm(sdcadj::solve(p, mesh, r.K, r.mode));
  });
}

sdca_status sdca_adapt(const sdca_problem* problem, const sdca_params* params, double tol,
                       int max_steps, sdca_trace** out) {
  if (!problem || !params || !out) return fail(SDCA_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const auto& b = problem->benchmark;
    auto trace = sdcadj::run_adaptive(b.problem, b.qoi, to_run_params(*params), tol, max_steps);
    *out = new sdca_trace{std::move(trace)};
  });
}

size_t sdca_trace_size(const sdca_trace* trace) { return trace ? trace->trace.rows.size() : 0; }

int sdca_trace_incomplete(const sdca_trace* trace) {
  return trace && trace->trace.incomplete ? 1 : 0;
}

sdca_status sdca_trace_row(const sdca_trace* trace, size_t index, sdca_adapt_row* out) {
  if (!trace || !out) return fail(SDCA_INVALID_ARGUMENT, "null argument");
  if (index >= trace->trace.rows.size()) return fail(SDCA_INVALID_ARGUMENT, "row out of range");
  const auto& r = trace->trace.rows[index];
  *out = sdca_adapt_row{r.estimate, r.dt, r.N, r.M, r.K, r.E_D, r.E_M, r.E_K, to_action(r.action)};
  return SDCA_OK;
}

void sdca_trace_free(sdca_trace* trace) { delete trace; }

const char* sdca_action_name(sdca_action action) {
  switch (action) {
    case SDCA_ACTION_HALVE_DT:
      return "halve_dt";
    case SDCA_ACTION_INC_M:
      return "inc_M";
    case SDCA_ACTION_INC_K:
      return "inc_K";
    case SDCA_ACTION_NONE:
      break;
  }
  return "";
}

const char* sdca_last_error(void) { return last_error.c_str(); }

const char* sdca_version(void) { return "0.1.0"; }

}  // extern "C"
