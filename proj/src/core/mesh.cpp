#include "sdcadj/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sdcadj/errors.hpp"

namespace sdcadj {
namespace {

struct Legendre {
  double p;   // P_n(x)
  double dp;  // P_n'(x)
};

Legendre legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  // P_n' from the standard identity; valid away from |x| = 1.
  double dp;
  if (std::abs(x) < 1.0) {
    dp = n * (x * p1 - p0) / (x * x - 1.0);
  } else {
    dp = 0.5 * n * (n + 1.0) * std::pow(x, n + 1);
  }
  return {p1, dp};
}

// Second derivative from Legendre's equation (1-x^2) P'' = 2x P' - n(n+1) P.
double legendre_second(int n, double x) {
  const Legendre l = legendre(n, x);
  return (2.0 * x * l.dp - n * (n + 1.0) * l.p) / (1.0 - x * x);
}

// Roots of g on (-1, 1), `count` of them, found by bracketing on a fine scan
// and then safeguarded Newton (bisection whenever Newton leaves the bracket).
template <class G, class DG>
std::vector<double> bracketed_roots(int count, G g, DG dg) {
  std::vector<double> roots;
  if (count == 0) return roots;
  const int scan = 16 * (count + 2) * (count + 2) + 64;
  double a = -1.0;
  double ga = g(a);
  for (int s = 1; s <= scan && static_cast<int>(roots.size()) < count; ++s) {
    double b = -1.0 + 2.0 * s / scan;
    if (s == scan) b = 1.0;
    const double gb = g(b);
    if (ga == 0.0) {
      roots.push_back(a);
    } else if (ga * gb < 0.0) {
      double lo = a;
      double hi = b;
      double glo = ga;
      double x = 0.5 * (lo + hi);
      for (int it = 0; it < 200; ++it) {
        const double gx = g(x);
        if (gx == 0.0) break;
        if ((gx < 0.0) == (glo < 0.0)) {
          lo = x;
          glo = gx;
        } else {
          hi = x;
        }
        const double d = dg(x);
        double next = (d != 0.0) ? x - gx / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step < 1e-14 || hi - lo < 1e-15) break;
      }
      // Two unguarded Newton steps from inside the bracket reach full precision.
      for (int it = 0; it < 2; ++it) {
        const double d = dg(x);
        if (d == 0.0) break;
        const double next = x - g(x) / d;
        if (!(next >= a && next <= b)) break;
        x = next;
      }
      roots.push_back(x);
    }
    a = b;
    ga = gb;
  }
  if (static_cast<int>(roots.size()) != count) {
    throw NumericalFailure("root bracketing found " + std::to_string(roots.size()) + " of " +
                           std::to_string(count) + " roots");
  }
  return roots;
}

}  // namespace

QuadRule gauss_lobatto(int points) {
  if (points < 2) throw InvalidArgument("gauss_lobatto: need at least 2 points");
  const int n = points - 1;  // interior nodes are roots of P_n'
  std::vector<double> interior = bracketed_roots(
      n - 1, [n](double x) { return legendre(n, x).dp; },
      [n](double x) { return legendre_second(n, x); });

  QuadRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(points));
  rule.nodes.push_back(-1.0);
  rule.nodes.insert(rule.nodes.end(), interior.begin(), interior.end());
  rule.nodes.push_back(1.0);
  // Enforce exact antisymmetry so mirrored meshes line up bitwise.
  for (int i = 0; i < points / 2; ++i) {
    const double x = 0.5 * (rule.nodes[static_cast<std::size_t>(points - 1 - i)] -
                            rule.nodes[static_cast<std::size_t>(i)]);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(points - 1 - i)] = x;
  }
  if (points % 2 == 1) rule.nodes[static_cast<std::size_t>(points / 2)] = 0.0;

  rule.weights.resize(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double p = legendre(n, rule.nodes[static_cast<std::size_t>(i)]).p;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / (n * (n + 1.0) * p * p);
  }
  return rule;
}

QuadRule gauss_legendre(int points) {
  if (points < 1) throw InvalidArgument("gauss_legendre: need at least 1 point");
  QuadRule rule;
  rule.nodes = bracketed_roots(
      points, [points](double x) { return legendre(points, x).p; },
      [points](double x) { return legendre(points, x).dp; });
  for (int i = 0; i < points / 2; ++i) {
    const double x = 0.5 * (rule.nodes[static_cast<std::size_t>(points - 1 - i)] -
                            rule.nodes[static_cast<std::size_t>(i)]);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(points - 1 - i)] = x;
  }
  if (points % 2 == 1) rule.nodes[static_cast<std::size_t>(points / 2)] = 0.0;
  rule.weights.resize(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double x = rule.nodes[static_cast<std::size_t>(i)];
    const double dp = legendre(points, x).dp;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

LagrangeBasis::LagrangeBasis(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw InvalidArgument("lagrange basis: empty node set");
  denominators_.assign(nodes_.size(), 1.0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (k == i) continue;
      const double diff = nodes_[i] - nodes_[k];
      if (diff == 0.0) throw InvalidArgument("lagrange basis: duplicate nodes");
      denominators_[i] *= diff;
    }
  }
}

double LagrangeBasis::value(std::size_t i, double t) const {
  double num = 1.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (k != i) num *= t - nodes_[k];
  }
  return num / denominators_[i];
}

double LagrangeBasis::derivative(std::size_t i, double t) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    if (j == i) continue;
    double prod = 1.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (k != i && k != j) prod *= t - nodes_[k];
    }
    sum += prod;
  }
  return sum / denominators_[i];
}

void LagrangeBasis::values(double t, std::span<double> out) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = value(i, t);
}

void LagrangeBasis::derivatives(double t, std::span<double> out) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = derivative(i, t);
}

double lagrange_basis(std::span<const double> nodes, std::size_t i, double t) {
  if (i >= nodes.size()) throw InvalidArgument("lagrange_basis: index out of range");
  return LagrangeBasis({nodes.begin(), nodes.end()}).value(i, t);
}

double lagrange_basis_derivative(std::span<const double> nodes, std::size_t i, double t) {
  if (i >= nodes.size()) throw InvalidArgument("lagrange_basis_derivative: index out of range");
  return LagrangeBasis({nodes.begin(), nodes.end()}).derivative(i, t);
}

TimeMesh TimeMesh::uniform(double final_time, int intervals, int subintervals) {
  if (!(final_time > 0.0)) throw InvalidArgument("time mesh: final time must be positive");
  if (intervals < 1) throw InvalidArgument("time mesh: need at least one interval");
  if (subintervals < 1) throw InvalidArgument("time mesh: need at least one subinterval");
  std::vector<double> outer(static_cast<std::size_t>(intervals) + 1);
  const double dt = final_time / intervals;
  for (int n = 0; n < intervals; ++n) outer[static_cast<std::size_t>(n)] = n * dt;
  outer.back() = final_time;
  return TimeMesh(std::move(outer), gauss_lobatto(subintervals + 1).nodes);
}

TimeMesh::TimeMesh(std::vector<double> outer, std::vector<double> reference_subnodes)
    : outer_(std::move(outer)), reference_(std::move(reference_subnodes)) {
  if (outer_.size() < 2) throw InvalidArgument("time mesh: need at least one interval");
  if (outer_.front() != 0.0) throw InvalidArgument("time mesh: grid must start at 0");
  for (std::size_t i = 1; i < outer_.size(); ++i) {
    if (!(outer_[i] > outer_[i - 1])) throw InvalidArgument("time mesh: outer grid not increasing");
  }
  if (reference_.size() < 2 || reference_.front() != -1.0 || reference_.back() != 1.0) {
    throw InvalidArgument("time mesh: reference subnodes must span [-1, 1]");
  }
  for (std::size_t i = 1; i < reference_.size(); ++i) {
    if (!(reference_[i] > reference_[i - 1])) {
      throw InvalidArgument("time mesh: reference subnodes not increasing");
    }
  }
  map_subnodes();
}

void TimeMesh::map_subnodes() {
  const int n_int = intervals();
  const int m_sub = subintervals();
  breakpoints_.assign(static_cast<std::size_t>(n_int * m_sub + 1), 0.0);
  for (int n = 0; n < n_int; ++n) {
    const double a = outer_[static_cast<std::size_t>(n)];
    const double b = outer_[static_cast<std::size_t>(n) + 1];
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int m = 0; m <= m_sub; ++m) {
      const double x = reference_[static_cast<std::size_t>(m)];
      // Endpoints are assigned, not computed, so t_{n,0} == t_n exactly.
      double t;
      if (m == 0) {
        t = a;
      } else if (m == m_sub) {
        t = b;
      } else {
        t = mid + x * half;
      }
      breakpoints_[static_cast<std::size_t>(n * m_sub + m)] = t;
    }
  }
}

TimeMesh TimeMesh::reversed() const {
  const double T = final_time();
  std::vector<double> outer(outer_.size());
  const std::size_t last = outer_.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) outer[i] = T - outer_[last - i];
  outer.front() = 0.0;
  outer.back() = T;
  TimeMesh mesh;
  mesh.outer_ = std::move(outer);
  mesh.reference_ = reference_;
  mesh.breakpoints_.resize(breakpoints_.size());
  const std::size_t bl = breakpoints_.size() - 1;
  for (std::size_t i = 0; i <= bl; ++i) mesh.breakpoints_[i] = T - breakpoints_[bl - i];
  // Re-pin outer nodes so interval endpoints agree with outer_ bitwise.
  const int m_sub = subintervals();
  for (int n = 0; n <= mesh.intervals(); ++n) {
    mesh.breakpoints_[static_cast<std::size_t>(n * m_sub)] = mesh.outer_[static_cast<std::size_t>(n)];
  }
  return mesh;
}

}  // namespace sdcadj
