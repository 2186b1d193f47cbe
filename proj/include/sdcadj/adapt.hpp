#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sdcadj/estimator.hpp"

namespace sdcadj {

enum class AdaptAction { HalveDt, IncrementM, IncrementK };

const char* to_string(AdaptAction action);

struct AdaptRow {
  double estimate = 0.0;
  double dt = 0.0;
  int N = 0;
  int M = 0;
  int K = 0;
  double E_D = 0.0;
  double E_M = 0.0;
  double E_K = 0.0;
  std::optional<AdaptAction> action;  ///< change applied after this row; unset on the last row
};

struct AdaptTrace {
  std::vector<AdaptRow> rows;
  bool incomplete = false;  ///< step limit hit before |estimate| <= TOL
};

/// Refines the parameter owning the largest |component|: E_D halves dt
/// (doubles N), E_M increments M, E_K increments K. Ties favour E_D, then E_M.
std::pair<RunParams, AdaptAction> next_parameters(const ErrorReport& report, const RunParams& params);

/// Estimate, refine, repeat until |estimate| <= tol or `max_steps` estimates
/// have been made.
AdaptTrace run_adaptive(const OdeProblem& problem, const Qoi& qoi, const RunParams& initial,
                        double tol, int max_steps = 25);

}  // namespace sdcadj
