#pragma once

#include <optional>

#include "sdcadj/galerkin.hpp"
#include "sdcadj/problems.hpp"
#include "sdcadj/sdc.hpp"

namespace sdcadj {

/// Discretization of the adjoint solve relative to the forward run.
struct AdjointConfig {
  int refinement = 2;                 ///< adjoint intervals = refinement * forward intervals
  std::optional<int> subintervals;    ///< M_adj; forward M when unset
  std::optional<int> iterations;      ///< K_adj; forward K when unset
  SdcMode mode = SdcMode::Implicit;
  std::optional<int> degree;          ///< q_adj; select_order() when unset
};

/// Linear adjoint problem  -phi' = J(t)^T phi + psi(t),  phi(T) = psi_T,
/// with J(t) = df/dy evaluated on `solution`. Returned as a forward problem
/// in s = T - t so the SDC solver applies unchanged.
OdeProblem build_adjoint(const OdeProblem& forward, const Qoi& qoi, const CgFunction& solution);

/// The problem y'(s) = -f(y, T - s), i.e. `problem` run backwards in time.
OdeProblem time_reversed(const OdeProblem& problem);

/// Solves the adjoint with SDC plus Galerkin reconstruction and returns phi in
/// the original time variable. `forward_iterations` is the forward K used
/// when cfg.iterations is unset.
CgFunction solve_adjoint(const OdeProblem& forward, const Qoi& qoi, const CgFunction& solution,
                         int forward_iterations, const AdjointConfig& cfg = {});

}  // namespace sdcadj
