#include "sdcadj/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdcadj/errors.hpp"

namespace sdcadj {

Vector solve_dense(const Matrix& A, const Vector& b) {
  Eigen::PartialPivLU<Matrix> lu(A);
  // PartialPivLU never reports singularity itself; check the U diagonal.
  const auto& u = lu.matrixLU();
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    if (!(std::abs(u(i, i)) > 1e-300 * scale)) {
      throw NumericalFailure("singular matrix in dense solve");
    }
  }
  return lu.solve(b);
}

Vector solve_banded(const Matrix& A, int bandwidth, const Vector& b) {
  const Eigen::Index n = A.rows();
  if (bandwidth < 0 || bandwidth >= n - 1) return solve_dense(A, b);

  // In-place elimination on a dense copy; only entries inside the band are
  // touched, so the factorization costs O(n b^2).
  Matrix lu = A;
  Vector x = b;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  for (Eigen::Index k = 0; k < n; ++k) {
    const double pivot = lu(k, k);
    if (!(std::abs(pivot) > 1e-12 * scale)) return solve_dense(A, b);
    const Eigen::Index last = std::min<Eigen::Index>(n - 1, k + bandwidth);
    for (Eigen::Index i = k + 1; i <= last; ++i) {
      const double factor = lu(i, k) / pivot;
      if (factor == 0.0) continue;
      for (Eigen::Index j = k; j <= last; ++j) lu(i, j) -= factor * lu(k, j);
      x(i) -= factor * x(k);
    }
  }
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    const Eigen::Index last = std::min<Eigen::Index>(n - 1, k + bandwidth);
    double acc = x(k);
    for (Eigen::Index j = k + 1; j <= last; ++j) acc -= lu(k, j) * x(j);
    x(k) = acc / lu(k, k);
  }
  return x;
}

double robust_max_norm(const Vector& v) {
  double norm = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (!std::isfinite(a)) return std::numeric_limits<double>::infinity();
    norm = std::max(norm, a);
  }
  return norm;
}

}  // namespace sdcadj
