#pragma once

#include <vector>

#include "sdcadj/linalg.hpp"
#include "sdcadj/mesh.hpp"
#include "sdcadj/problems.hpp"

namespace sdcadj {

/// Explicit sweeps pair with the left-hand rule, implicit sweeps with the
/// right-hand rule.
enum class SdcMode { Explicit, Implicit };

const char* to_string(SdcMode mode);

/// Values at the M+1 subnodes of one interval.
using NodalValues = std::vector<Vector>;

/// S[m][j] = integral over subinterval m of the Lagrange basis L_j through
/// `subnodes`. Rows sum to the subinterval lengths. Throws InvalidArgument on
/// fewer than two or non-increasing nodes.
Matrix integration_matrix(std::span<const double> subnodes);

struct SweepResult {
  NodalValues values;  ///< Y^{k+1}_{n,m}
  NodalValues rhs;     ///< f(Y^{k+1}_{n,m}, t_{n,m})
};

/// One correction sweep over interval n. `previous` / `previous_rhs` hold the
/// k-th iterate and its f-values; `y_start` is Y^{k+1}_{n,0}. The integration
/// matrix is the reference one from integration_matrix(mesh.reference_subnodes()).
SweepResult sweep(const TimeMesh& mesh, int interval, const Matrix& reference_integration,
                  const NodalValues& previous, const NodalValues& previous_rhs,
                  const Vector& y_start, SdcMode mode, const OdeProblem& problem);

/// Solves Y - dt * f(Y, t_next) = c by Newton with the analytic Jacobian.
/// Absolute residual tolerance 1e-12, at most 50 iterations. Throws
/// IterationFailure (with interval/subnode set to -1) when it does not converge.
Vector implicit_substep(const Vector& c, double dt, double t_next, const Vector& guess,
                        const OdeProblem& problem);

/// Nodal SDC solution. Only the last two iterates are kept, plus the f-values
/// of iterate K-2 that are needed to rebuild the Galerkin form of Y^{K-1}.
struct SdcSolution {
  TimeMesh mesh;
  SdcMode mode = SdcMode::Explicit;
  int iterations = 0;  ///< K

  std::vector<NodalValues> final_values;     ///< Y^K per interval
  std::vector<NodalValues> previous_values;  ///< Y^{K-1} per interval
  std::vector<NodalValues> final_rhs;        ///< f(Y^K)
  std::vector<NodalValues> previous_rhs;     ///< f(Y^{K-1})
  std::vector<NodalValues> before_previous_rhs;  ///< f(Y^{K-2}); empty when K == 1

  const Vector& final_state() const { return final_values.back().back(); }
};

/// Runs K sweeps on every interval in order. Each interval starts from the
/// incoming value repeated across its subnodes.
SdcSolution solve(const OdeProblem& problem, const TimeMesh& mesh, int iterations, SdcMode mode);

/// Largest |Y^K_{n,m}| over all nodes; +inf if any value is non-finite.
double max_nodal_norm(const SdcSolution& solution);

}  // namespace sdcadj
