#include "sdcadj/adjoint.hpp"

#include <memory>

#include "sdcadj/errors.hpp"

namespace sdcadj {

OdeProblem build_adjoint(const OdeProblem& forward, const Qoi& qoi, const CgFunction& solution) {
  if (solution.mesh().final_time() != forward.final_time) {
    throw InvalidArgument("build_adjoint: solution does not span [0, T]");
  }
  const double T = forward.final_time;
  auto y = std::make_shared<const CgFunction>(solution);
  const JacobianFn jac = forward.jacobian;
  const TimeFn psi = qoi.psi;

  OdeProblem adj;
  adj.name = forward.name + "_adjoint";
  adj.dimension = forward.dimension;
  adj.rhs = [y, jac, psi, T](const Vector& phi, double s) -> Vector {
    const double t = T - s;
    return jac(y->eval(t), t).transpose() * phi + psi(t);
  };
  adj.jacobian = [y, jac, T](const Vector&, double s) -> Matrix {
    const double t = T - s;
    return jac(y->eval(t), t).transpose();
  };
  adj.y0 = qoi.psi_T;
  adj.final_time = T;
  adj.structure = forward.structure;
  adj.linear = true;
  return adj;
}

OdeProblem time_reversed(const OdeProblem& problem) {
  const double T = problem.final_time;
  OdeProblem r = problem;
  r.name = problem.name + "_reversed";
  r.rhs = [f = problem.rhs, T](const Vector& y, double s) -> Vector { return -f(y, T - s); };
  r.jacobian = [J = problem.jacobian, T](const Vector& y, double s) -> Matrix { return -J(y, T - s); };
  if (problem.exact_solution) {
    r.exact_solution = [e = problem.exact_solution, T](double s) { return e(T - s); };
  }
  return r;
}

CgFunction solve_adjoint(const OdeProblem& forward, const Qoi& qoi, const CgFunction& solution,
                         int forward_iterations, const AdjointConfig& cfg) {
  if (cfg.refinement < 1) throw InvalidArgument("solve_adjoint: refinement must be >= 1");
  const TimeMesh& fmesh = solution.mesh();
  const int intervals = cfg.refinement * fmesh.intervals();
  const int M = cfg.subintervals.value_or(fmesh.subintervals());
  const int K = cfg.iterations.value_or(forward_iterations);
  const TimeMesh mesh = TimeMesh::uniform(forward.final_time, intervals, M);

  const OdeProblem adjoint = build_adjoint(forward, qoi, solution);
  const SdcSolution sdc = solve(adjoint, mesh, K, cfg.mode);
  const int q = cfg.degree.value_or(select_order(forward.final_time / intervals, M, K));
  return reconstruct(sdc, q).final_iterate.reversed();
}

}  // namespace sdcadj
