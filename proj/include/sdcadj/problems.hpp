#pragma once

#include <functional>
#include <string>

#include "sdcadj/linalg.hpp"

namespace sdcadj {

/// Sparsity hint used to pick the linear solver for implicit substeps.
struct Structure {
  enum class Kind { Dense, Banded };
  Kind kind = Kind::Dense;
  int bandwidth = 0;

  static Structure dense() { return {}; }
  static Structure banded(int bw) { return {Kind::Banded, bw}; }
  bool is_banded() const { return kind == Kind::Banded; }
};

using RhsFn = std::function<Vector(const Vector& y, double t)>;
using JacobianFn = std::function<Matrix(const Vector& y, double t)>;
using TimeFn = std::function<Vector(double t)>;

/// Initial-value problem  y' = f(y, t),  y(0) = y0  on (0, T].
/// All callables must be re-entrant.
struct OdeProblem {
  std::string name;
  int dimension = 0;
  RhsFn rhs;
  JacobianFn jacobian;
  Vector y0;
  double final_time = 0.0;
  TimeFn exact_solution;  ///< empty when no closed form is known
  Structure structure;
  bool linear = false;  ///< f affine in y; one Newton step is exact

  bool has_exact_solution() const { return static_cast<bool>(exact_solution); }
};

/// Q(y) = int_0^T (y, psi) dt + (y(T), psi_T).
struct Qoi {
  std::string name;
  TimeFn psi;
  Vector psi_T;
};

struct Benchmark {
  OdeProblem problem;
  Qoi qoi;
};

/// Forward-difference Jacobian with step sqrt(eps) * max(1, |y_i|).
JacobianFn finite_difference_jacobian(RhsFn rhs, int dimension);

/// Constant weight function psi(t) = w.
TimeFn constant_weight(Vector w);

/// Parameters of the damped, forced oscillator m x'' + c x' + k x = F0 cos(w t + phase).
/// The defaults reproduce the published benchmark tables: the forcing enters the
/// first-order system as F0/m and the angular frequency is 10.
struct HarmonicParams {
  double mass = 0.5;
  double damping = 1.0;
  double stiffness = 1.0;
  double amplitude = 10.0;
  double omega = 10.0;
  double phase = 0.0;
  bool forcing_over_mass = true;  ///< false: y2' gets F0 cos(...) without the 1/m factor

  /// Coefficients exactly as the benchmark's matrix form is usually written:
  /// w = 20 and h = [0, F0 cos(w t)].
  static HarmonicParams as_written();
  /// Coefficient of cos(w t + phase) in the y2 equation.
  double forcing_scale() const { return forcing_over_mass ? amplitude / mass : amplitude; }
};

/// The oscillator as the system y' = B y + [0, s cos(w t + phase)], y(0) = [0, 1],
/// T=5, QoI psi = [1, 1], psi_T = [1, 0].
Benchmark harmonic_oscillator(const HarmonicParams& params = {});

/// Non-autonomous linear 2x2 system with y(0) = [-1, 3], T=2.
Benchmark vinograd();

/// Kepler two-body problem with eccentricity 0.6, y(0) = [0.4, 0, 0, 2].
/// Default QoI psi = psi_T = [1, 1, 0, 0] on T=2.
Benchmark two_body(double final_time = 2.0);

/// Two-body variant with Gaussian weight psi = exp(-(t-2)^2) [1, 1, 0, 0],
/// psi_T = [1, 1, 0, 0], default T=8.
Benchmark two_body_gaussian(double final_time = 8.0);

/// Central-difference semi-discretization of u_t = u_xx + sin(pi x) cos(2 pi t)
/// with `interior_nodes` unknowns, zero Dirichlet data and zero initial state,
/// T=2. The QoI has no canonical choice and must be supplied.
Benchmark heat_equation(int interior_nodes, Qoi qoi);

/// psi = 0, psi_T = [1/d, ..., 1/d]: the mean state at the final time.
Qoi terminal_average(int dimension);

/// psi = 0, psi_T = [1, ..., 1]: the summed state at the final time.
Qoi terminal_sum(int dimension);

/// Time-dependent forcing for custom linear problems.
struct Forcing {
  enum class Kind { None, Cos, SinCos };
  Kind kind = Kind::None;
  double omega = 0.0;
  double phase = 0.0;
  Vector amplitude;      ///< Cos: g = cos(omega t + phase) * amplitude; SinCos: sin coefficient
  Vector cos_amplitude;  ///< SinCos only: g = sin(omega t) a + cos(omega t) b
};

/// y' = B y + g(t) with constant weights.
Benchmark linear_problem(std::string name, Matrix B, Forcing forcing, Vector y0, double final_time,
                         Vector psi, Vector psi_T);

/// Reads a custom linear problem from a plain-text config file; see README.
Benchmark load_linear_config(const std::string& path);

/// Same, from the file contents.
Benchmark parse_linear_config(const std::string& text);

}  // namespace sdcadj
