#include "sdcadj/sdc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdcadj/errors.hpp"

namespace sdcadj {

const char* to_string(SdcMode mode) {
  return mode == SdcMode::Explicit ? "explicit" : "implicit";
}

Matrix integration_matrix(std::span<const double> subnodes) {
  if (subnodes.size() < 2) throw InvalidArgument("integration_matrix: need at least two nodes");
  for (std::size_t i = 1; i < subnodes.size(); ++i) {
    if (!(subnodes[i] > subnodes[i - 1])) {
      throw InvalidArgument("integration_matrix: nodes must be distinct and increasing");
    }
  }
  const int M = static_cast<int>(subnodes.size()) - 1;
  const LagrangeBasis basis({subnodes.begin(), subnodes.end()});
  // Integrands have degree M; ceil((M+2)/2) Gauss points integrate them exactly.
  const QuadRule gauss = gauss_legendre((M + 3) / 2);
  Matrix S = Matrix::Zero(M, M + 1);
  std::vector<double> values(static_cast<std::size_t>(M) + 1);
  for (int m = 0; m < M; ++m) {
    const double a = subnodes[static_cast<std::size_t>(m)];
    const double b = subnodes[static_cast<std::size_t>(m) + 1];
    const double half = 0.5 * (b - a);
    for (std::size_t g = 0; g < gauss.nodes.size(); ++g) {
      const double t = 0.5 * (a + b) + half * gauss.nodes[g];
      basis.values(t, values);
      for (int j = 0; j <= M; ++j) S(m, j) += half * gauss.weights[g] * values[static_cast<std::size_t>(j)];
    }
  }
  return S;
}

Vector implicit_substep(const Vector& c, double dt, double t_next, const Vector& guess,
                        const OdeProblem& problem) {
  if (!(dt > 0.0)) throw InvalidArgument("implicit_substep: step must be positive");
  constexpr double tolerance = 1e-12;
  constexpr int max_iterations = 50;

  Vector y = guess;
  const auto identity = Matrix::Identity(problem.dimension, problem.dimension);
  double residual_norm = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const Vector residual = y - dt * problem.rhs(y, t_next) - c;
    residual_norm = robust_max_norm(residual);
    if (residual_norm <= tolerance) return y;
    if (!std::isfinite(residual_norm)) break;
    const Matrix newton = identity - dt * problem.jacobian(y, t_next);
    const Vector delta = problem.structure.is_banded()
                             ? solve_banded(newton, problem.structure.bandwidth, residual)
                             : solve_dense(newton, residual);
    y -= delta;
    // Affine f: the Newton step is exact up to rounding.
    if (problem.linear) return y;
    // Converged to rounding when the correction no longer moves y.
    if (robust_max_norm(delta) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(1.0, robust_max_norm(y))) {
      return y;
    }
  }
  throw IterationFailure(-1, -1, residual_norm);
}

SweepResult sweep(const TimeMesh& mesh, int interval, const Matrix& reference_integration,
                  const NodalValues& previous, const NodalValues& previous_rhs,
                  const Vector& y_start, SdcMode mode, const OdeProblem& problem) {
  const int M = mesh.subintervals();
  if (static_cast<int>(previous.size()) != M + 1 || static_cast<int>(previous_rhs.size()) != M + 1) {
    throw InvalidArgument("sweep: previous iterate must have M+1 entries");
  }
  const double scale = 0.5 * mesh.interval_length(interval);

  SweepResult out;
  out.values.resize(static_cast<std::size_t>(M) + 1);
  out.rhs.resize(static_cast<std::size_t>(M) + 1);
  out.values[0] = y_start;
  out.rhs[0] = problem.rhs(y_start, mesh.subnode(interval, 0));

  for (int m = 0; m < M; ++m) {
    const auto um = static_cast<std::size_t>(m);
    const double dt = mesh.subinterval_length(interval, m);
    // Picard term: integral of the interpolant of f^k over the subinterval.
    Vector picard = Vector::Zero(problem.dimension);
    for (int j = 0; j <= M; ++j) {
      picard += (scale * reference_integration(m, j)) * previous_rhs[static_cast<std::size_t>(j)];
    }
    if (mode == SdcMode::Explicit) {
      out.values[um + 1] = out.values[um] + dt * (out.rhs[um] - previous_rhs[um]) + picard;
      out.rhs[um + 1] = problem.rhs(out.values[um + 1], mesh.subnode(interval, m + 1));
    } else {
      const double t_next = mesh.subnode(interval, m + 1);
      const Vector c = out.values[um] - dt * previous_rhs[um + 1] + picard;
      try {
        out.values[um + 1] = implicit_substep(c, dt, t_next, previous[um + 1], problem);
      } catch (const IterationFailure& e) {
        throw IterationFailure(interval, m + 1, e.residual());
      }
      out.rhs[um + 1] = problem.rhs(out.values[um + 1], t_next);
    }
  }
  return out;
}

SdcSolution solve(const OdeProblem& problem, const TimeMesh& mesh, int iterations, SdcMode mode) {
  if (iterations < 1) throw InvalidArgument("solve: need at least one iteration");
  if (problem.y0.size() != problem.dimension) throw InvalidArgument("solve: y0 has wrong size");
  const int N = mesh.intervals();
  const int M = mesh.subintervals();
  const Matrix S = integration_matrix(mesh.reference_subnodes());

  SdcSolution sol{mesh, mode, iterations, {}, {}, {}, {}, {}};
  sol.final_values.reserve(static_cast<std::size_t>(N));
  sol.previous_values.reserve(static_cast<std::size_t>(N));
  sol.final_rhs.reserve(static_cast<std::size_t>(N));
  sol.previous_rhs.reserve(static_cast<std::size_t>(N));
  if (iterations >= 2) sol.before_previous_rhs.reserve(static_cast<std::size_t>(N));

  Vector incoming = problem.y0;
  for (int n = 0; n < N; ++n) {
    NodalValues current(static_cast<std::size_t>(M) + 1, incoming);
    NodalValues current_rhs(static_cast<std::size_t>(M) + 1);
    for (int m = 0; m <= M; ++m) {
      current_rhs[static_cast<std::size_t>(m)] = problem.rhs(incoming, mesh.subnode(n, m));
    }
    NodalValues older_rhs;
    NodalValues older_values;
    NodalValues oldest_rhs;
    for (int k = 0; k < iterations; ++k) {
      SweepResult next = sweep(mesh, n, S, current, current_rhs, incoming, mode, problem);
      oldest_rhs = std::move(older_rhs);
      older_values = std::move(current);
      older_rhs = std::move(current_rhs);
      current = std::move(next.values);
      current_rhs = std::move(next.rhs);
    }
    incoming = current.back();
    sol.final_values.push_back(std::move(current));
    sol.final_rhs.push_back(std::move(current_rhs));
    sol.previous_values.push_back(std::move(older_values));
    sol.previous_rhs.push_back(std::move(older_rhs));
    if (iterations >= 2) sol.before_previous_rhs.push_back(std::move(oldest_rhs));
  }
  return sol;
}

double max_nodal_norm(const SdcSolution& solution) {
  double norm = 0.0;
  for (const auto& interval : solution.final_values) {
    for (const auto& v : interval) norm = std::max(norm, robust_max_norm(v));
  }
  return norm;
}

}  // namespace sdcadj
