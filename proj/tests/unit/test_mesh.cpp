#include <cmath>
#include <random>

#include "doctest.h"
#include "sdcadj/errors.hpp"
#include "sdcadj/mesh.hpp"

using namespace sdcadj;

namespace {

// Root of P3'(x) = (15 x^2 - 3) / 2 on (0, 1) by plain bisection.
double legendre3_derivative_root() {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((15.0 * mid * mid - 3.0) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("gauss_lobatto small rules") {
  const QuadRule p2 = gauss_lobatto(2);
  CHECK(p2.nodes == std::vector<double>{-1.0, 1.0});
  CHECK(p2.weights[0] == doctest::Approx(1.0));
  CHECK(p2.weights[1] == doctest::Approx(1.0));

  const QuadRule p3 = gauss_lobatto(3);
  CHECK(p3.nodes[1] == doctest::Approx(0.0));
  CHECK(p3.weights[0] == doctest::Approx(1.0 / 3.0));
  CHECK(p3.weights[1] == doctest::Approx(4.0 / 3.0));
  CHECK(p3.weights[2] == doctest::Approx(1.0 / 3.0));

  const QuadRule p4 = gauss_lobatto(4);
  const double r = legendre3_derivative_root();
  CHECK(r == doctest::Approx(1.0 / std::sqrt(5.0)));
  CHECK(p4.nodes[0] == -1.0);
  CHECK(p4.nodes[1] == doctest::Approx(-r).epsilon(1e-14));
  CHECK(p4.nodes[2] == doctest::Approx(r).epsilon(1e-14));
  CHECK(p4.nodes[3] == 1.0);
  double s5 = 0.0, s4 = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    s5 += p4.weights[i] * std::pow(p4.nodes[i], 5);
    s4 += p4.weights[i] * std::pow(p4.nodes[i], 4);
  }
  CHECK(std::abs(s5) < 1e-14);
  CHECK(s4 == doctest::Approx(0.4).epsilon(1e-14));

  CHECK_THROWS_AS(gauss_lobatto(1), InvalidArgument);
  CHECK_THROWS_AS(gauss_legendre(0), InvalidArgument);
}

TEST_CASE("quadrature rules: ordering, positivity, unit mass") {
  for (int p = 2; p <= 16; ++p) {
    for (const QuadRule& r : {gauss_lobatto(p), gauss_legendre(p)}) {
      double sum = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        CHECK(r.weights[i] > 0.0);
        if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
        sum += r.weights[i];
      }
      CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("lagrange basis") {
  const std::vector<double> nodes{0.0, 0.5, 1.0};
  CHECK(lagrange_basis(nodes, 1, 0.25) == doctest::Approx(0.75));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(lagrange_basis(nodes, i, nodes[j]) == (i == j ? 1.0 : 0.0));
    }
  }
  for (double t : {-0.3, 0.1, 0.77, 1.4}) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) sum += lagrange_basis(nodes, i, t);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(lagrange_basis(std::vector<double>{0.0, 0.5, 0.5}, 0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(LagrangeBasis(std::vector<double>{1.0, 1.0}), InvalidArgument);
}

TEST_CASE("lagrange derivative matches centered differences") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 9;
    std::vector<double> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back((i + 0.2 + 0.6 * unit(gen)) / n);
    const LagrangeBasis basis(nodes);
    const double t = unit(gen);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double h = 1e-6;
      const double fd = (basis.value(i, t + h) - basis.value(i, t - h)) / (2 * h);
      const double d = basis.derivative(i, t);
      CHECK(std::abs(fd - d) <= 1e-6 * std::max(1.0, std::abs(d)));
      CHECK(lagrange_basis_derivative(nodes, i, t) == doctest::Approx(d));
    }
  }
}

TEST_CASE("uniform mesh") {
  const TimeMesh mesh = TimeMesh::uniform(5.0, 10, 3);
  CHECK(mesh.intervals() == 10);
  CHECK(mesh.subintervals() == 3);
  CHECK(mesh.breakpoints().size() == 31);
  double total = 0.0;
  for (int n = 0; n < mesh.intervals(); ++n) {
    CHECK(mesh.interval_length(n) == doctest::Approx(0.5));
    CHECK(mesh.subnode(n, 0) == mesh.node(n));
    CHECK(mesh.subnode(n, 3) == mesh.node(n + 1));
    double inner = 0.0;
    for (int m = 0; m < 3; ++m) {
      CHECK(mesh.subinterval_length(n, m) > 0.0);
      inner += mesh.subinterval_length(n, m);
    }
    CHECK(inner == doctest::Approx(mesh.interval_length(n)).epsilon(1e-14));
    total += inner;
  }
  CHECK(total == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(mesh.node(0) == 0.0);
  CHECK(mesh.final_time() == 5.0);

  const TimeMesh one = TimeMesh::uniform(1.0, 1, 1);
  CHECK(one.breakpoints().size() == 2);
  CHECK(one.subnode(0, 0) == 0.0);
  CHECK(one.subnode(0, 1) == 1.0);

  CHECK_THROWS_AS(TimeMesh::uniform(0.0, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(TimeMesh::uniform(1.0, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(TimeMesh::uniform(1.0, 1, 0), InvalidArgument);
}

TEST_CASE("reversed mesh mirrors the breakpoints") {
  const TimeMesh mesh = TimeMesh::uniform(2.0, 4, 3);
  const TimeMesh rev = mesh.reversed();
  const auto a = mesh.breakpoints();
  const auto b = rev.breakpoints();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(b[i] == doctest::Approx(2.0 - a[a.size() - 1 - i]).epsilon(1e-15));
  }
}
