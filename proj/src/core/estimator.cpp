#include "sdcadj/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "sdcadj/errors.hpp"
#include "sdcadj/oracle.hpp"

namespace sdcadj {
namespace {

// Pairwise summation keeps the reduction order fixed and the rounding small.
double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Splits [a, b] at the breakpoints strictly inside it.
std::vector<double> cut_points(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> cuts{a};
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), a);
  for (; it != breakpoints.end() && *it < b; ++it) cuts.push_back(*it);
  cuts.push_back(b);
  return cuts;
}

// Calls body(t, weight) for every Gauss point of every piece of [a, b].
template <class Body>
void integrate_pieces(double a, double b, std::span<const double> breakpoints, const QuadRule& rule,
                      Body&& body) {
  const std::vector<double> cuts = cut_points(a, b, breakpoints);
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double c0 = cuts[p];
    const double c1 = cuts[p + 1];
    const double mid = 0.5 * (c0 + c1);
    const double half = 0.5 * (c1 - c0);
    for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
      body(mid + half * rule.nodes[g], half * rule.weights[g]);
    }
  }
}

}  // namespace

AdjointWeight::AdjointWeight(const CgFunction& phi) : degree_(phi.degree()) {
  auto shared = std::make_shared<const CgFunction>(phi);
  fn_ = [shared](double t) { return shared->eval(t); };
  const auto bp = phi.mesh().breakpoints();
  breakpoints_.assign(bp.begin() + 1, bp.end() - 1);
}

AdjointWeight::AdjointWeight(TimeFn fn, std::vector<double> breakpoints)
    : fn_(std::move(fn)), breakpoints_(std::move(breakpoints)) {
  std::sort(breakpoints_.begin(), breakpoints_.end());
}

int estimator_quadrature_points(int q, int q_adjoint, int M) {
  // q + q_adj + 3 covers the polynomial products; the second term keeps
  // the interpolant-times-projection products exact for large M; the floor
  // resolves the non-polynomial f(Y(t), t) factors.
  return std::max({q + q_adjoint + 3, (M + q + q_adjoint) / 2 + 2, 10});
}

double qoi_value(const CgFunction& solution, const Qoi& qoi) {
  const QuadRule rule = gauss_legendre(solution.degree() + 4);
  std::vector<double> parts(static_cast<std::size_t>(solution.segment_count()), 0.0);
  for (int s = 0; s < solution.segment_count(); ++s) {
    const double a = solution.segment_begin(s);
    const double b = solution.segment_end(s);
    double acc = 0.0;
    for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[g];
      acc += 0.5 * (b - a) * rule.weights[g] * solution.eval_in(s, t).dot(qoi.psi(t));
    }
    parts[static_cast<std::size_t>(s)] = acc;
  }
  const double T = solution.mesh().final_time();
  return pairwise_sum(parts) + solution.eval(T).dot(qoi.psi_T);
}

double estimate_total(const CgFunction& solution, const AdjointWeight& phi,
                      const OdeProblem& problem, std::optional<int> points) {
  const int M = solution.mesh().subintervals();
  const QuadRule rule =
      gauss_legendre(points.value_or(estimator_quadrature_points(solution.degree(), phi.degree(), M)));
  std::vector<double> parts(static_cast<std::size_t>(solution.segment_count()), 0.0);
  for (int s = 0; s < solution.segment_count(); ++s) {
    double acc = 0.0;
    integrate_pieces(solution.segment_begin(s), solution.segment_end(s), phi.breakpoints(), rule,
                     [&](double t, double w) {
                       const Vector y = solution.eval_in(s, t);
                       const Vector residual = problem.rhs(y, t) - solution.deriv_in(s, t);
                       acc += w * residual.dot(phi(t));
                     });
    parts[static_cast<std::size_t>(s)] = acc;
  }
  return pairwise_sum(parts);
}

ErrorReport estimate_components(const Reconstruction& rec, const AdjointWeight& phi,
                                const SdcSolution& sdc, const OdeProblem& problem,
                                Projection projection, std::optional<int> points) {
  const TimeMesh& mesh = sdc.mesh;
  const CgFunction& Y = rec.final_iterate;
  const int N = mesh.intervals();
  const int M = mesh.subintervals();
  const int q = Y.degree();
  const bool explicit_mode = sdc.mode == SdcMode::Explicit;

  const QuadRule rule = gauss_legendre(points.value_or(estimator_quadrature_points(q, phi.degree(), M)));
  const QuadRule projection_rule = gauss_legendre(q);
  const LagrangeBasis projection_basis(projection_rule.nodes);
  const LagrangeBasis subnode_basis({mesh.reference_subnodes().begin(), mesh.reference_subnodes().end()});

  const auto segments = static_cast<std::size_t>(mesh.subinterval_count());
  std::vector<double> disc(segments, 0.0), interp(segments, 0.0), iter(segments, 0.0);
  std::vector<double> lagrange(static_cast<std::size_t>(M) + 1);
  std::vector<Vector> phi_nodes(static_cast<std::size_t>(q));

  for (int n = 0; n < N; ++n) {
    const auto un = static_cast<std::size_t>(n);
    const NodalValues& fk = sdc.final_rhs[un];
    const NodalValues& fk1 = sdc.previous_rhs[un];
    const double tn = mesh.node(n);
    const double dtn = mesh.interval_length(n);

    for (int m = 0; m < M; ++m) {
      const int s = n * M + m;
      const double a = mesh.subnode(n, m);
      const double b = mesh.subnode(n, m + 1);
      const double h = b - a;

      // pi phi: Lagrange interpolant of phi at the Gauss points of [a, b].
      if (projection == Projection::GaussNodal) {
        for (int i = 0; i < q; ++i) {
          phi_nodes[static_cast<std::size_t>(i)] =
              phi(0.5 * (a + b) + 0.5 * h * projection_rule.nodes[static_cast<std::size_t>(i)]);
        }
      }
      auto project = [&](double t) -> Vector {
        Vector out = Vector::Zero(problem.dimension);
        if (projection == Projection::Zero) return out;
        const double x = 2.0 * (t - a) / h - 1.0;
        for (int i = 0; i < q; ++i) {
          out += projection_basis.value(static_cast<std::size_t>(i), x) * phi_nodes[static_cast<std::size_t>(i)];
        }
        return out;
      };

      double ed = 0.0;
      double em = 0.0;
      double ek = 0.0;
      integrate_pieces(a, b, phi.breakpoints(), rule, [&](double t, double w) {
        const Vector y = Y.eval_in(s, t);
        const Vector dy = Y.deriv_in(s, t);
        const Vector fy = problem.rhs(y, t);
        const Vector ph = phi(t);
        subnode_basis.values(-1.0 + 2.0 * (t - tn) / dtn, lagrange);
        Vector sk = Vector::Zero(problem.dimension);
        Vector sk1 = Vector::Zero(problem.dimension);
        for (int j = 0; j <= M; ++j) {
          const double l = lagrange[static_cast<std::size_t>(j)];
          sk += l * fk[static_cast<std::size_t>(j)];
          sk1 += l * fk1[static_cast<std::size_t>(j)];
        }
        ed += w * (sk1 - dy).dot(ph - project(t));
        em += w * (fy - sk).dot(ph);
        ek += w * (sk - sk1).dot(ph);
      });

      // Endpoint-rule terms: left end for explicit sweeps, right end for implicit.
      const int e = explicit_mode ? m : m + 1;
      const auto ue = static_cast<std::size_t>(e);
      const double te = mesh.subnode(n, e);
      const Vector jump = fk[ue] - fk1[ue];
      const Vector ph = phi(te);
      ed += h * jump.dot(ph - project(te));
      ek -= h * jump.dot(ph);

      disc[static_cast<std::size_t>(s)] = ed;
      interp[static_cast<std::size_t>(s)] = em;
      iter[static_cast<std::size_t>(s)] = ek;
    }
  }

  ErrorReport report;
  report.E_D = pairwise_sum(disc);
  report.E_M = pairwise_sum(interp);
  report.E_K = pairwise_sum(iter);
  report.N = N;
  report.M = M;
  report.K = sdc.iterations;
  report.mode = sdc.mode;
  report.q = q;
  report.q_adjoint = phi.degree();
  report.dt = mesh.final_time() / N;
  return report;
}

double effectivity(double exact, double estimate) {
  if (!(std::abs(estimate) >= 1e-300)) {
    throw DegenerateRatio("effectivity: estimate is numerically zero");
  }
  return exact / estimate;
}

ErrorReport run_estimate(const OdeProblem& problem, const Qoi& qoi, const RunParams& params) {
  if (params.N < 1 || params.M < 1 || params.K < 1) {
    throw InvalidArgument("run_estimate: N, M and K must be positive");
  }
  const TimeMesh mesh = TimeMesh::uniform(problem.final_time, params.N, params.M);
  const SdcSolution sdc = solve(problem, mesh, params.K, params.mode);
  const double dt = problem.final_time / params.N;
  const int q = params.degree.value_or(select_order(dt, params.M, params.K));
  const Reconstruction rec = reconstruct(sdc, q);
  const CgFunction phi = solve_adjoint(problem, qoi, rec.final_iterate, params.K, params.adjoint);
  const AdjointWeight weight(phi);

  ErrorReport report = estimate_components(rec, weight, sdc, problem, Projection::GaussNodal,
                                           params.quadrature_points);
  report.estimate = estimate_total(rec.final_iterate, weight, problem, params.quadrature_points);
  report.adjoint = params.adjoint;

  if (params.compute_exact) {
    const ExactError exact =
        exact_qoi_error(problem, qoi, rec.final_iterate, {params.N, params.M, params.K});
    report.exact_error = exact.value;
    report.exact_from_reference = exact.from_reference;
    if (std::abs(report.estimate) >= 1e-300) {
      report.effectivity = effectivity(exact.value, report.estimate);
    }
  }
  return report;
}

}  // namespace sdcadj
