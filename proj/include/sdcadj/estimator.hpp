#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sdcadj/adjoint.hpp"
#include "sdcadj/galerkin.hpp"
#include "sdcadj/problems.hpp"
#include "sdcadj/sdc.hpp"

namespace sdcadj {

/// Adjoint weight phi(t) as seen by the estimator: a callable plus the
/// points where it is only piecewise smooth. Integrals are split there.
class AdjointWeight {
 public:
  AdjointWeight(const CgFunction& phi);  // NOLINT(google-explicit-constructor)
  explicit AdjointWeight(TimeFn fn, std::vector<double> breakpoints = {});

  Vector operator()(double t) const { return fn_(t); }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  /// Degree used for quadrature sizing; 0 for non-polynomial weights.
  int degree() const noexcept { return degree_; }

 private:
  TimeFn fn_;
  std::vector<double> breakpoints_;
  int degree_ = 0;
};

/// How phi is projected onto P^{q-1} in the discretization component.
enum class Projection {
  GaussNodal,  ///< interpolation at the q Gauss-Legendre points of each subinterval
  Zero,        ///< pi phi = 0 (diagnostic; moves mass between E_D and the orthogonality term)
};

struct ErrorReport {
  double estimate = 0.0;  ///< single weighted-residual integral
  double E_D = 0.0;
  double E_M = 0.0;
  double E_K = 0.0;
  std::optional<double> exact_error;
  std::optional<double> effectivity;
  bool exact_from_reference = false;

  // Echoed parameters.
  double dt = 0.0;
  int N = 0;
  int M = 0;
  int K = 0;
  SdcMode mode = SdcMode::Explicit;
  int q = 0;
  int q_adjoint = 0;
  AdjointConfig adjoint;

  double component_sum() const { return E_D + E_M + E_K; }
};

/// Q(Y) = int_0^T (Y, psi) dt + (Y(T), psi_T); q+4 Gauss points per subinterval.
double qoi_value(const CgFunction& solution, const Qoi& qoi);

/// Gauss points per integration piece for a forward degree q, adjoint degree
/// q_adj and M subintervals.
int estimator_quadrature_points(int q, int q_adjoint, int M);

/// <f(Y,t) - Y', phi> over [0, T], accumulated per subinterval of Y's mesh
/// and split at phi's breakpoints. `points` overrides the rule size.
double estimate_total(const CgFunction& solution, const AdjointWeight& phi,
                      const OdeProblem& problem, std::optional<int> points = std::nullopt);

/// Discretization / interpolation / iteration components. Only E_D, E_M,
/// E_K (and the echoed q, N, M, K, mode) are filled in.
ErrorReport estimate_components(const Reconstruction& rec, const AdjointWeight& phi,
                                const SdcSolution& sdc, const OdeProblem& problem,
                                Projection projection = Projection::GaussNodal,
                                std::optional<int> points = std::nullopt);

/// exact / estimate. Throws DegenerateRatio when |estimate| < 1e-300.
double effectivity(double exact, double estimate);

/// Parameters of one estimation run.
struct RunParams {
  int N = 1;
  int M = 3;
  int K = 2;
  SdcMode mode = SdcMode::Explicit;
  std::optional<int> degree;  ///< q; select_order() when unset
  AdjointConfig adjoint;
  bool compute_exact = true;
  std::optional<int> quadrature_points;  ///< estimator_quadrature_points() when unset
};

/// Solve at subnodes, reconstruct, solve the adjoint, then evaluate the
/// estimate and its components (plus the exact error when requested).
ErrorReport run_estimate(const OdeProblem& problem, const Qoi& qoi, const RunParams& params);

}  // namespace sdcadj
