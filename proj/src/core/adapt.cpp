#include "sdcadj/adapt.hpp"

#include <cmath>

#include "sdcadj/errors.hpp"

namespace sdcadj {

const char* to_string(AdaptAction action) {
  switch (action) {
    case AdaptAction::HalveDt:
      return "halve_dt";
    case AdaptAction::IncrementM:
      return "inc_M";
    case AdaptAction::IncrementK:
      return "inc_K";
  }
  return "unknown";
}

std::pair<RunParams, AdaptAction> next_parameters(const ErrorReport& report, const RunParams& params) {
  const double d = std::abs(report.E_D);
  const double m = std::abs(report.E_M);
  const double k = std::abs(report.E_K);
  RunParams next = params;
  if (d >= m && d >= k) {
    next.N = params.N * 2;
    return {next, AdaptAction::HalveDt};
  }
  if (m >= k) {
    next.M = params.M + 1;
    return {next, AdaptAction::IncrementM};
  }
  next.K = params.K + 1;
  return {next, AdaptAction::IncrementK};
}

AdaptTrace run_adaptive(const OdeProblem& problem, const Qoi& qoi, const RunParams& initial,
                        double tol, int max_steps) {
  if (!(tol > 0.0)) throw InvalidArgument("run_adaptive: tolerance must be positive");
  if (max_steps < 1) throw InvalidArgument("run_adaptive: need at least one step");

  AdaptTrace trace;
  RunParams params = initial;
  params.compute_exact = false;
  for (int step = 0; step < max_steps; ++step) {
    const ErrorReport report = run_estimate(problem, qoi, params);
    AdaptRow row{report.estimate, report.dt, params.N, params.M, params.K,
                 report.E_D,      report.E_M, report.E_K, std::nullopt};
    if (std::abs(report.estimate) <= tol) {
      trace.rows.push_back(row);
      return trace;
    }
    auto [next, action] = next_parameters(report, params);
    if (step + 1 < max_steps) row.action = action;
    trace.rows.push_back(row);
    params = next;
  }
  trace.incomplete = true;
  return trace;
}

}  // namespace sdcadj
