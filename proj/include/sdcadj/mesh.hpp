#pragma once

#include <span>
#include <vector>

namespace sdcadj {

/// Quadrature rule on the reference interval [-1, 1].
struct QuadRule {
  std::vector<double> nodes;    ///< strictly increasing
  std::vector<double> weights;  ///< positive, summing to 2
};

/// Gauss-Lobatto rule with `points` nodes (both endpoints included).
/// Exact for polynomials of degree <= 2*points - 3. Requires points >= 2.
QuadRule gauss_lobatto(int points);

/// Gauss-Legendre rule with `points` interior nodes.
/// Exact for polynomials of degree <= 2*points - 1. Requires points >= 1.
QuadRule gauss_legendre(int points);

/// Lagrange basis on a fixed node set. Node distinctness is checked once at
/// construction; evaluation is then unchecked.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(std::vector<double> nodes);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }

  double value(std::size_t i, double t) const;
  double derivative(std::size_t i, double t) const;

  /// All basis values at t, written to `out` (size() entries).
  void values(double t, std::span<double> out) const;
  void derivatives(double t, std::span<double> out) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> denominators_;  // prod_{k != i} (x_i - x_k)
};

/// l_i(t) for the Lagrange basis through `nodes`. Throws InvalidArgument on
/// duplicate nodes.
double lagrange_basis(std::span<const double> nodes, std::size_t i, double t);

/// d l_i / dt for the Lagrange basis through `nodes`.
double lagrange_basis_derivative(std::span<const double> nodes, std::size_t i, double t);

/// Two-level time grid: N outer intervals, each split into M subintervals by
/// Gauss-Lobatto subnodes. Subnodes are stored once, so the last subnode of
/// interval n and the first of interval n+1 are the same double.
class TimeMesh {
 public:
  /// Uniform outer grid with Delta t = T / N and M+1 Gauss-Lobatto subnodes.
  static TimeMesh uniform(double final_time, int intervals, int subintervals);

  /// General outer grid `outer` (strictly increasing, starting at 0) with the
  /// same reference subnodes mapped into every interval.
  TimeMesh(std::vector<double> outer, std::vector<double> reference_subnodes);

  double final_time() const noexcept { return outer_.back(); }
  int intervals() const noexcept { return static_cast<int>(outer_.size()) - 1; }
  int subintervals() const noexcept { return static_cast<int>(reference_.size()) - 1; }
  int subinterval_count() const noexcept { return intervals() * subintervals(); }

  double node(int n) const { return outer_[static_cast<std::size_t>(n)]; }
  double interval_length(int n) const { return node(n + 1) - node(n); }

  /// t_{n,m}, m = 0..M.
  double subnode(int n, int m) const {
    return breakpoints_[static_cast<std::size_t>(n * subintervals() + m)];
  }
  /// Delta t_{n,m} = t_{n,m+1} - t_{n,m}.
  double subinterval_length(int n, int m) const { return subnode(n, m + 1) - subnode(n, m); }

  /// Subnodes of interval n (M+1 values).
  std::span<const double> interval_subnodes(int n) const {
    return std::span<const double>(breakpoints_).subspan(
        static_cast<std::size_t>(n * subintervals()), static_cast<std::size_t>(subintervals() + 1));
  }

  /// All subnodes in order, N*M + 1 values.
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> outer_nodes() const noexcept { return outer_; }
  /// Subnode positions on [-1, 1].
  std::span<const double> reference_subnodes() const noexcept { return reference_; }

  /// Mesh of s = T - t. Reference subnodes must be symmetric, which holds
  /// for Gauss-Lobatto points.
  TimeMesh reversed() const;

 private:
  TimeMesh() = default;
  void map_subnodes();

  std::vector<double> outer_;
  std::vector<double> reference_;
  std::vector<double> breakpoints_;
};

}  // namespace sdcadj
