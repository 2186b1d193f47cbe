#pragma once

#include <Eigen/Dense>

namespace sdcadj {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Solves A x = b for a matrix whose nonzeros lie within `bandwidth` of the
/// diagonal. Uses a banded LU without pivoting, falling back to a dense
/// partial-pivot LU when a pivot degenerates.
Vector solve_banded(const Matrix& A, int bandwidth, const Vector& b);

/// Dense partial-pivot LU solve. Throws NumericalFailure on a singular matrix.
Vector solve_dense(const Matrix& A, const Vector& b);

/// Max-norm that reports +inf whenever any entry is non-finite.
double robust_max_norm(const Vector& v);

}  // namespace sdcadj
