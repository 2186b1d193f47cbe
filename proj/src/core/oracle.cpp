#include "sdcadj/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "sdcadj/errors.hpp"
#include "sdcadj/estimator.hpp"
#include "sdcadj/sdc.hpp"

namespace sdcadj {

double kepler_anomaly(double t) {
  constexpr double e = 0.6;
  constexpr double tolerance = 1e-14;
  auto g = [t](double tau) { return tau - e * std::sin(tau) - t; };

  double tau = t;
  for (int it = 0; it < 50; ++it) {
    const double step = g(tau) / (1.0 - e * std::cos(tau));
    tau -= step;
    if (std::abs(step) <= tolerance * std::max(1.0, std::abs(tau))) return tau;
  }
  // tau = t + e sin(tau) lies in [t - e, t + e], and g is increasing.
  double lo = t - e;
  double hi = t + e;
  for (int it = 0; it < 200 && hi - lo > tolerance * std::max(1.0, std::abs(t)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  tau = 0.5 * (lo + hi);
  if (!(std::abs(g(tau)) < 1e-12)) throw NumericalFailure("kepler_anomaly: no convergence");
  return tau;
}

Vector two_body_exact(double t) {
  const double tau = kepler_anomaly(t);
  const double c = std::cos(tau);
  const double s = std::sin(tau);
  const double denom = 1.0 - 0.6 * c;
  Vector y(4);
  y << c - 0.6, 0.8 * s, -s / denom, 0.8 * c / denom;
  return y;
}

Vector harmonic_exact(double t, const HarmonicParams& params) {
  using cd = std::complex<double>;
  const double amplitude = params.forcing_scale();
  const double omega = params.omega;

  // y' = B y + [0, s cos(w t + phase)],  B = [[0, 1], [-k/m, -c/m]]
  const double b10 = -params.stiffness / params.mass;
  const double b11 = -params.damping / params.mass;
  const double mu = 0.5 * b11;
  const double disc = -b10 - mu * mu;
  if (!(disc > 0.0)) throw InvalidArgument("harmonic_exact: oscillator must be underdamped");

  // Particular solution Re(c e^{i (w t + phase)}) with (i w I - B) c = [0, s].
  const cd iw(0.0, omega);
  const cd a00 = iw, a01 = -1.0, a10 = -b10, a11 = iw - b11;
  const cd det = a00 * a11 - a01 * a10;
  const cd c0 = (-a01 * amplitude) / det;
  const cd c1 = (a00 * amplitude) / det;
  const cd rot0 = std::exp(cd(0.0, params.phase));
  const cd rot = std::exp(cd(0.0, omega * t + params.phase));

  // Homogeneous part e^{B t} v with v = y0 - y_p(0); eigenvalues mu +- i nu.
  const double nu = std::sqrt(disc);
  const double v0 = 0.0 - (c0 * rot0).real();
  const double v1 = 1.0 - (c1 * rot0).real();
  const double decay = std::exp(mu * t);
  const double cs = std::cos(nu * t);
  const double sn = std::sin(nu * t) / nu;
  // e^{Bt} = e^{mu t} [cos(nu t) I + sin(nu t)/nu (B - mu I)]
  const double h0 = decay * (cs * v0 + sn * (-mu * v0 + v1));
  const double h1 = decay * (cs * v1 + sn * (b10 * v0 + (b11 - mu) * v1));

  Vector y(2);
  y << h0 + (c0 * rot).real(), h1 + (c1 * rot).real();
  return y;
}

double ReferenceSolution::consistency() const { return std::abs(qoi - check_qoi); }

namespace {

struct ReferenceRun {
  CgFunction solution;
  double qoi;
};

ReferenceRun reference_run(const OdeProblem& problem, const Qoi& qoi, int N, int M, int K) {
  const TimeMesh mesh = TimeMesh::uniform(problem.final_time, N, M);
  const SdcSolution sdc = solve(problem, mesh, K, SdcMode::Implicit);
  const double dt = problem.final_time / N;
  const int q = dt < 1.0 ? select_order(dt, M, K) : std::min(M, K);
  CgFunction y = reconstruct(sdc, q).final_iterate;
  const double value = qoi_value(y, qoi);
  return {std::move(y), value};
}

}  // namespace

ReferenceSolution reference_solve(const OdeProblem& problem, const Qoi& qoi,
                                  const ReferenceProfile& profile) {
  if (profile.N < 1 || profile.M < 1 || profile.K < 1) {
    throw InvalidArgument("reference_solve: profile must be positive");
  }
  const int M = std::min(profile.M + 3, 9);
  const int K = std::min(profile.K + 3, 12);
  ReferenceRun fine = reference_run(problem, qoi, 16 * profile.N, M, K);
  const ReferenceRun finer = reference_run(problem, qoi, 32 * profile.N, M, K);
  return {std::move(fine.solution), fine.qoi, finer.qoi};
}

double analytic_qoi(const OdeProblem& problem, const Qoi& qoi) {
  if (!problem.has_exact_solution()) throw InvalidArgument("analytic_qoi: no closed form");
  constexpr int panels = 400;
  const QuadRule rule = gauss_legendre(5);
  const double T = problem.final_time;
  const double width = T / panels;
  std::vector<double> parts(panels, 0.0);
  for (int p = 0; p < panels; ++p) {
    const double a = p * width;
    double acc = 0.0;
    for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
      const double t = a + 0.5 * width * (rule.nodes[g] + 1.0);
      acc += 0.5 * width * rule.weights[g] * problem.exact_solution(t).dot(qoi.psi(t));
    }
    parts[static_cast<std::size_t>(p)] = acc;
  }
  double sum = 0.0;
  for (double v : parts) sum += v;
  return sum + problem.exact_solution(T).dot(qoi.psi_T);
}

ExactError exact_qoi_error(const OdeProblem& problem, const Qoi& qoi, const CgFunction& solution,
                           const ReferenceProfile& profile) {
  const double computed = qoi_value(solution, qoi);
  if (problem.has_exact_solution()) return {analytic_qoi(problem, qoi) - computed, false};

  const ReferenceSolution ref = reference_solve(problem, qoi, profile);
  const double error = ref.qoi - computed;
  const double gate = std::max(1e-3 * std::abs(error), 1e-13 * std::max(1.0, std::abs(ref.qoi)));
  if (!(ref.consistency() < gate)) {
    throw ReferenceUnreliable("reference QoI changed by " + std::to_string(ref.consistency()) +
                              " under refinement, above the gate " + std::to_string(gate));
  }
  return {error, true};
}

}  // namespace sdcadj
