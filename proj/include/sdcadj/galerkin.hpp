#pragma once

#include <span>
#include <vector>

#include "sdcadj/linalg.hpp"
#include "sdcadj/mesh.hpp"
#include "sdcadj/problems.hpp"
#include "sdcadj/sdc.hpp"

namespace sdcadj {

inline constexpr int kMaxGalerkinDegree = 12;

/// Degree q of the continuous Galerkin reconstruction whose L2 accuracy
/// matches SDC's nodal order min(K, M):
///   q = ceil(min(K,M) ln dt / (ln dt - ln M) - 1), clamped to [1, 12].
/// Requires 0 < dt < 1.
int select_order(double dt, int M, int K);

/// Piecewise polynomial of degree q on every subinterval of a TimeMesh,
/// stored as values at q+1 uniformly spaced local nodes (endpoints included).
/// Subinterval lookup is right-closed, so a breakpoint belongs to the
/// subinterval on its left.
class CgFunction {
 public:
  CgFunction(TimeMesh mesh, int degree, int dimension, std::vector<Vector> coefficients,
             bool continuous = true);

  /// Interpolates `fn` at the local nodes of every subinterval.
  static CgFunction sample(const TimeMesh& mesh, int degree, const TimeFn& fn);

  const TimeMesh& mesh() const noexcept { return mesh_; }
  int degree() const noexcept { return degree_; }
  int dimension() const noexcept { return dimension_; }
  /// False for iterates that restart at every outer node (Y^{K-1}).
  bool continuous() const noexcept { return continuous_; }

  int segment_count() const noexcept { return mesh_.subinterval_count(); }
  double segment_begin(int s) const { return mesh_.breakpoints()[static_cast<std::size_t>(s)]; }
  double segment_end(int s) const { return mesh_.breakpoints()[static_cast<std::size_t>(s) + 1]; }
  /// Local node t_i of segment s, i = 0..q.
  double local_node(int s, int i) const;
  std::span<const Vector> segment(int s) const {
    return std::span<const Vector>(coefficients_)
        .subspan(static_cast<std::size_t>(s) * (static_cast<std::size_t>(degree_) + 1),
                 static_cast<std::size_t>(degree_) + 1);
  }

  /// Segment containing t (right-closed; t = 0 maps to segment 0).
  int locate(double t) const;

  /// Value / time derivative at t in [0, T]. Throws InvalidArgument outside.
  Vector eval(double t) const;
  Vector deriv(double t) const;

  /// Evaluation restricted to segment s (t may be any real; polynomial
  /// extension). Endpoints of s return the stored coefficients exactly.
  Vector eval_in(int s, double t) const;
  Vector deriv_in(int s, double t) const;

  /// The same function expressed in s = T - t.
  CgFunction reversed() const;

 private:
  TimeMesh mesh_;
  int degree_;
  int dimension_;
  std::vector<Vector> coefficients_;
  bool continuous_;
  LagrangeBasis unit_basis_;  // uniform nodes i/q on [0, 1]
};

/// Galerkin forms of the last two SDC iterates.
struct Reconstruction {
  CgFunction final_iterate;     ///< Y^K(t)
  CgFunction previous_iterate;  ///< Y^{K-1}(t); discontinuous at outer nodes
};

/// Rebuilds the nodally equivalent cG(q) functions from an SDC solution.
/// Endpoint coefficients are the SDC nodal values; for q > 1 the q-1 interior
/// coefficients of each subinterval solve the small system obtained by
/// testing the equivalent variational form against the degree q-1 Lagrange
/// basis on q uniform nodes (all but the one at the right end).
Reconstruction reconstruct(const SdcSolution& sdc, int degree);

/// Uniform nodes {0, 1/(n-1), ..., 1}; {0} when n == 1.
std::vector<double> uniform_unit_nodes(int n);

}  // namespace sdcadj
