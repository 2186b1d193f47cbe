#include "sdcadj/problems.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sdcadj/errors.hpp"
#include "sdcadj/oracle.hpp"

namespace sdcadj {

JacobianFn finite_difference_jacobian(RhsFn rhs, int dimension) {
  return [rhs = std::move(rhs), dimension](const Vector& y, double t) {
    const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    const Vector f0 = rhs(y, t);
    Matrix J(dimension, dimension);
    Vector yp = y;
    for (int j = 0; j < dimension; ++j) {
      const double h = root_eps * std::max(1.0, std::abs(y(j)));
      yp(j) = y(j) + h;
      J.col(j) = (rhs(yp, t) - f0) / h;
      yp(j) = y(j);
    }
    return J;
  };
}

TimeFn constant_weight(Vector w) {
  return [w = std::move(w)](double) { return w; };
}

HarmonicParams HarmonicParams::as_written() {
  HarmonicParams p;
  p.omega = 20.0;
  p.forcing_over_mass = false;
  return p;
}

Benchmark harmonic_oscillator(const HarmonicParams& params) {
  if (!(params.mass > 0.0)) throw InvalidArgument("harmonic_oscillator: mass must be positive");
  // y' = -A y + h(t),  A = [[0, -1], [k/m, c/m]]
  Matrix B(2, 2);
  B << 0.0, 1.0, -params.stiffness / params.mass, -params.damping / params.mass;
  const double scale = params.forcing_scale();
  const double omega = params.omega;
  const double phase = params.phase;

  OdeProblem p;
  p.name = "harmonic";
  p.dimension = 2;
  p.rhs = [B, scale, omega, phase](const Vector& y, double t) {
    Vector f = B * y;
    f(1) += scale * std::cos(omega * t + phase);
    return f;
  };
  p.jacobian = [B](const Vector&, double) { return B; };
  p.y0 = Vector(2);
  p.y0 << 0.0, 1.0;
  p.final_time = 5.0;
  p.exact_solution = [params](double t) { return harmonic_exact(t, params); };
  p.linear = true;

  Qoi q;
  q.name = "default";
  q.psi = constant_weight(Vector::Ones(2));
  q.psi_T = Vector(2);
  q.psi_T << 1.0, 0.0;
  return {std::move(p), std::move(q)};
}

namespace {

Matrix vinograd_matrix(double t) {
  const double c = std::cos(6.0 * t);
  const double s = std::sin(6.0 * t);
  const double s12 = std::sin(12.0 * t);
  Matrix B(2, 2);
  B(0, 0) = -(1.0 + 9.0 * c * c - 6.0 * s12);
  B(0, 1) = -(-12.0 * c * c - 4.5 * s12);
  B(1, 0) = -(12.0 * s * s - 4.5 * s12);
  B(1, 1) = -(1.0 + 9.0 * s * s + 6.0 * s12);
  return B;
}

}  // namespace

Benchmark vinograd() {
  OdeProblem p;
  p.name = "vinograd";
  p.dimension = 2;
  p.rhs = [](const Vector& y, double t) -> Vector { return vinograd_matrix(t) * y; };
  p.jacobian = [](const Vector&, double t) { return vinograd_matrix(t); };
  p.y0 = Vector(2);
  p.y0 << -1.0, 3.0;
  p.final_time = 2.0;
  p.linear = true;

  Qoi q;
  q.name = "default";
  q.psi = constant_weight(Vector::Ones(2));
  q.psi_T = Vector::Ones(2);
  return {std::move(p), std::move(q)};
}

namespace {

OdeProblem two_body_problem(double final_time) {
  if (!(final_time > 0.0)) throw InvalidArgument("two_body: final time must be positive");
  OdeProblem p;
  p.name = "two_body";
  p.dimension = 4;
  p.rhs = [](const Vector& y, double) {
    const double r2 = y(0) * y(0) + y(1) * y(1);
    const double r3 = r2 * std::sqrt(r2);
    Vector f(4);
    f << y(2), y(3), -y(0) / r3, -y(1) / r3;
    return f;
  };
  p.jacobian = [](const Vector& y, double) {
    const double r2 = y(0) * y(0) + y(1) * y(1);
    const double r = std::sqrt(r2);
    const double r3 = r2 * r;
    const double r5 = r3 * r2;
    Matrix J = Matrix::Zero(4, 4);
    J(0, 2) = 1.0;
    J(1, 3) = 1.0;
    J(2, 0) = -1.0 / r3 + 3.0 * y(0) * y(0) / r5;
    J(2, 1) = 3.0 * y(0) * y(1) / r5;
    J(3, 0) = 3.0 * y(0) * y(1) / r5;
    J(3, 1) = -1.0 / r3 + 3.0 * y(1) * y(1) / r5;
    return J;
  };
  p.y0 = Vector(4);
  p.y0 << 0.4, 0.0, 0.0, 2.0;
  p.final_time = final_time;
  p.exact_solution = [](double t) { return two_body_exact(t); };
  return p;
}

Vector position_weight() {
  Vector w = Vector::Zero(4);
  w(0) = 1.0;
  w(1) = 1.0;
  return w;
}

}  // namespace

Benchmark two_body(double final_time) {
  Qoi q;
  q.name = "default";
  q.psi = constant_weight(position_weight());
  q.psi_T = position_weight();
  return {two_body_problem(final_time), std::move(q)};
}

Benchmark two_body_gaussian(double final_time) {
  Qoi q;
  q.name = "gaussian";
  q.psi = [w = position_weight()](double t) -> Vector {
    return std::exp(-(t - 2.0) * (t - 2.0)) * w;
  };
  q.psi_T = position_weight();
  return {two_body_problem(final_time), std::move(q)};
}

Benchmark heat_equation(int interior_nodes, Qoi qoi) {
  if (interior_nodes < 1) throw InvalidArgument("heat_equation: need at least one interior node");
  if (qoi.psi_T.size() != interior_nodes || !qoi.psi) {
    throw InvalidArgument("heat_equation: QoI dimension does not match the grid");
  }
  const int d = interior_nodes;
  const double h = 1.0 / (d + 1);
  const double inv_h2 = 1.0 / (h * h);
  Vector profile(d);
  for (int i = 0; i < d; ++i) profile(i) = std::sin(std::numbers::pi * (i + 1) * h);

  Matrix J = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    J(i, i) = -2.0 * inv_h2;
    if (i > 0) J(i, i - 1) = inv_h2;
    if (i + 1 < d) J(i, i + 1) = inv_h2;
  }

  OdeProblem p;
  p.name = "heat";
  p.dimension = d;
  p.rhs = [d, inv_h2, profile](const Vector& y, double t) {
    Vector f(d);
    const double forcing = std::cos(2.0 * std::numbers::pi * t);
    for (int i = 0; i < d; ++i) {
      const double left = i > 0 ? y(i - 1) : 0.0;
      const double right = i + 1 < d ? y(i + 1) : 0.0;
      f(i) = inv_h2 * (left - 2.0 * y(i) + right) + profile(i) * forcing;
    }
    return f;
  };
  p.jacobian = [J](const Vector&, double) { return J; };
  p.y0 = Vector::Zero(d);
  p.final_time = 2.0;
  p.structure = Structure::banded(1);
  p.linear = true;
  return {std::move(p), std::move(qoi)};
}

Qoi terminal_average(int dimension) {
  Qoi q;
  q.name = "terminal_average";
  q.psi = constant_weight(Vector::Zero(dimension));
  q.psi_T = Vector::Constant(dimension, 1.0 / dimension);
  return q;
}

Qoi terminal_sum(int dimension) {
  Qoi q;
  q.name = "terminal_sum";
  q.psi = constant_weight(Vector::Zero(dimension));
  q.psi_T = Vector::Ones(dimension);
  return q;
}

Benchmark linear_problem(std::string name, Matrix B, Forcing forcing, Vector y0, double final_time,
                         Vector psi, Vector psi_T) {
  const auto d = B.rows();
  if (d < 1 || B.cols() != d) throw InvalidArgument("linear problem: matrix must be square");
  if (y0.size() != d || psi.size() != d || psi_T.size() != d) {
    throw InvalidArgument("linear problem: vector sizes do not match the matrix");
  }
  if (!(final_time > 0.0)) throw InvalidArgument("linear problem: final time must be positive");
  switch (forcing.kind) {
    case Forcing::Kind::None:
      break;
    case Forcing::Kind::Cos:
      if (forcing.amplitude.size() != d) throw InvalidArgument("linear problem: forcing size");
      break;
    case Forcing::Kind::SinCos:
      if (forcing.amplitude.size() != d || forcing.cos_amplitude.size() != d) {
        throw InvalidArgument("linear problem: forcing size");
      }
      break;
  }

  OdeProblem p;
  p.name = std::move(name);
  p.dimension = static_cast<int>(d);
  p.rhs = [B, forcing](const Vector& y, double t) -> Vector {
    Vector f = B * y;
    switch (forcing.kind) {
      case Forcing::Kind::None:
        break;
      case Forcing::Kind::Cos:
        f += std::cos(forcing.omega * t + forcing.phase) * forcing.amplitude;
        break;
      case Forcing::Kind::SinCos:
        f += std::sin(forcing.omega * t) * forcing.amplitude +
             std::cos(forcing.omega * t) * forcing.cos_amplitude;
        break;
    }
    return f;
  };
  p.jacobian = [B](const Vector&, double) { return B; };
  p.y0 = std::move(y0);
  p.final_time = final_time;
  p.linear = true;

  int bandwidth = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (B(i, j) != 0.0) bandwidth = std::max<int>(bandwidth, static_cast<int>(std::abs(i - j)));
    }
  }
  if (d > 4 && bandwidth < d / 4) p.structure = Structure::banded(bandwidth);

  Qoi q;
  q.name = "config";
  q.psi = constant_weight(std::move(psi));
  q.psi_T = std::move(psi_T);
  return {std::move(p), std::move(q)};
}

}  // namespace sdcadj
