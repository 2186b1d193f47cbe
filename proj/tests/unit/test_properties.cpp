#include "checks.hpp"
#include "doctest.h"
#include "sdcadj/estimator.hpp"

using namespace sdcadj;

TEST_SUITE("properties") {
  TEST_CASE("reconstruction is nodally equivalent to SDC (bitwise)") {
    for (const auto& nb : checks::benchmark_set()) {
      const auto& p = nb.benchmark.problem;
      for (SdcMode mode : {SdcMode::Explicit, SdcMode::Implicit}) {
        if (nb.mode == SdcMode::Implicit && mode == SdcMode::Explicit) continue;  // heat: unstable
        const SdcSolution sdc = solve(p, TimeMesh::uniform(p.final_time, nb.N, 3), 2, mode);
        for (int q = 1; q <= 4; ++q) {
          CAPTURE(nb.name);
          CAPTURE(q);
          CHECK(checks::nodal_mismatches(sdc, reconstruct(sdc, q).final_iterate) == 0);
        }
      }
    }
  }

  TEST_CASE("galerkin orthogonality of the reconstruction") {
    for (const auto& nb : checks::benchmark_set()) {
      const auto& p = nb.benchmark.problem;
      for (int K : {1, 2, 4}) {
        for (int M : {2, 3, 5}) {
          const SdcSolution sdc = solve(p, TimeMesh::uniform(p.final_time, nb.N, M), K, nb.mode);
          for (int q = 1; q <= 4; ++q) {
            CAPTURE(nb.name);
            CAPTURE(K);
            CAPTURE(M);
            CAPTURE(q);
            CHECK(checks::orthogonality_residual(sdc, reconstruct(sdc, q).final_iterate) < 1e-10);
          }
        }
      }
    }
  }

  TEST_CASE("quadrature exactness") { CHECK(checks::quadrature_exactness_error() < 1e-13); }

  TEST_CASE("error representation is exact for a linear problem with its exact adjoint") {
    for (SdcMode mode : {SdcMode::Explicit, SdcMode::Implicit}) {
      for (int q : {1, 2, 3}) {
        CAPTURE(q);
        CHECK(checks::linear_exactness_gap(10, 3, 2, mode, q) < 1e-10);
        CHECK(checks::linear_exactness_gap(40, 4, 3, mode, q) < 1e-10);
      }
    }
  }

  TEST_CASE("benchmark jacobians match finite differences") {
    for (const auto& nb : checks::benchmark_set()) {
      const auto& p = nb.benchmark.problem;
      const SdcSolution sdc = solve(p, TimeMesh::uniform(p.final_time, nb.N, 3), 2, nb.mode);
      CAPTURE(nb.name);
      CHECK(checks::jacobian_fd_error(p, checks::nodal_trajectory(sdc), 50, 42) < 1e-5);
    }
  }
}
