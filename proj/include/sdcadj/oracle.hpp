#pragma once

#include "sdcadj/galerkin.hpp"
#include "sdcadj/linalg.hpp"
#include "sdcadj/problems.hpp"

namespace sdcadj {

/// tau solving tau - 0.6 sin(tau) = t (Newton from tau = t, bisection fallback).
double kepler_anomaly(double t);

/// Closed-form two-body state for eccentricity 0.6.
Vector two_body_exact(double t);

/// Closed-form solution of the forced harmonic-oscillator benchmark
/// (requires an underdamped oscillator).
Vector harmonic_exact(double t, const HarmonicParams& params = {});

/// Discretization of the finest experiment a reference must beat.
struct ReferenceProfile {
  int N = 1;
  int M = 3;
  int K = 2;
};

struct ReferenceSolution {
  CgFunction solution;  ///< implicit SDC at N*16, M+3 (<= 9), K+3 (<= 12)
  double qoi = 0.0;
  double check_qoi = 0.0;  ///< same settings at N*32
  double consistency() const;
};

ReferenceSolution reference_solve(const OdeProblem& problem, const Qoi& qoi,
                                  const ReferenceProfile& profile);

/// Q(y) from the closed-form solution: composite 5-point Gauss on 400 panels.
double analytic_qoi(const OdeProblem& problem, const Qoi& qoi);

struct ExactError {
  double value = 0.0;
  bool from_reference = false;
};

/// Q(y) - Q(Y). Uses the closed form when the problem has one, otherwise a
/// reference solve, which must pass its self-consistency gate
/// (|Q_16 - Q_32| < 1e-3 |error|, floor 1e-13 max(1, |Q|)) or
/// ReferenceUnreliable is thrown.
ExactError exact_qoi_error(const OdeProblem& problem, const Qoi& qoi, const CgFunction& solution,
                           const ReferenceProfile& profile);

}  // namespace sdcadj
