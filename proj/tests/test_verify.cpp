#include <doctest.h>

#include <cmath>

#include "liouville/error.hpp"
#include "liouville/oracles.hpp"
#include "liouville/shooting.hpp"
#include "liouville/verify.hpp"

using namespace liouville;

namespace {

const Potential kGauss(PowerGauss{0.0, 1.0, 2.0});

}  // namespace

TEST_CASE("bubble satisfies the index formula") {
  const NormalizedSolution b = conformal_bubble(1.0, 1.0, Grid::make(1e4, 60000, Grading::Log));
  const IdentityReport rep = check_identities(b, Potential(Constant{1.0}));
  CHECK(rep.pokhozhaev_residual < 1e-8);
  CHECK(rep.log_lip_ok);
  CHECK(rep.grad_bound_ok);
}

TEST_CASE("shooting solution passes every identity") {
  const NormalizedSolution sol = solve_for_beta(kGauss, 0.0, 1.0).solution;
  const IdentityReport rep = check_identities(sol, kGauss);
  CHECK(rep.mass_residual < 1e-6);
  CHECK(rep.flux_residual < 2e-6);
  CHECK(rep.slope_at_infinity < 1e-3);
  CHECK(rep.pokhozhaev_residual < 1e-4);
  CHECK(rep.log_lip_ok);
  CHECK(rep.grad_bound_ok);
  CHECK(rep.P_min >= -1e-6);
  CHECK(std::isfinite(rep.c2_upper));
  // Deterministic.
  const IdentityReport again = check_identities(sol, kGauss);
  CHECK(again.flux_residual == rep.flux_residual);
  CHECK(again.pokhozhaev_residual == rep.pokhozhaev_residual);
}

TEST_CASE("corrupted profile is detected") {
  NormalizedSolution sol = solve_for_beta(kGauss, 0.0, 1.0).solution;
  for (std::size_t i = sol.psi.size() / 2; i < sol.psi.size(); ++i) sol.psi[i] += 0.1;
  CHECK(check_identities(sol, kGauss).flux_residual > 1e-2);
}

TEST_CASE("report needs enough nodes") {
  const NormalizedSolution b = conformal_bubble(1.0, 1.0, Grid::make(10.0, 32, Grading::Log));
  CHECK_THROWS_AS(check_identities(b, Potential(Constant{1.0})), Error);
}

TEST_CASE("json report carries every field") {
  const NormalizedSolution b = conformal_bubble(1.0, 2.0, Grid::make(100.0, 2000, Grading::Log));
  const std::string j = to_json(check_identities(b, Potential(Constant{1.0})));
  for (const char* key : {"mass_residual", "flux_residual", "slope_at_infinity", "pokhozhaev_residual", "log_lip_ok",
                          "grad_bound_ok", "P_min"}) {
    CHECK(j.find(std::string("\"") + key + "\"") != std::string::npos);
  }
}

TEST_CASE("comparison modes") {
  const NormalizedSolution a = conformal_bubble(1.0, 1.0, Grid::make(50.0, 3000, Grading::Log));
  CHECK(compare_solutions(a, a, CompareMode::SupDiff).value == 0.0);

  // Resampling onto a different grid is accurate for a smooth profile.
  const NormalizedSolution b = conformal_bubble(1.0, 1.0, Grid::make(40.0, 1777, Grading::Log));
  CHECK(compare_solutions(a, b, CompareMode::SupDiff).value < 1e-5);

  const NormalizedSolution c = conformal_bubble(1.0, 1.3, a.grid);
  CHECK(compare_solutions(a, c, CompareMode::SupDiff).value > 0.1);

  NormalizedSolution other_n = a;
  other_n.n = 1.0;
  CHECK_THROWS_AS(compare_solutions(a, other_n, CompareMode::SupDiff), Error);
  NormalizedSolution other_v = a;
  other_v.potential = "gauss:npow=0,gamma=1,alpha=2";
  CHECK_THROWS_AS(compare_solutions(a, other_v, CompareMode::SupDiff), Error);
}

TEST_CASE("negative beta ordering") {
  const NormalizedSolution s1 = solve_for_beta(kGauss, 0.0, -1.0).solution;
  const NormalizedSolution s2 = solve_for_beta(kGauss, 0.0, -0.5).solution;
  const CompareReport rep = compare_solutions(s1, s2, CompareMode::BetaMonotone);
  CHECK(rep.value < 1e-6);
  CHECK(rep.points > 0);
}

TEST_CASE("recomputed mass matches the stored column") {
  const NormalizedSolution sol = solve_for_beta(kGauss, 0.0, 0.5).solution;
  const std::vector<double> m = recompute_mass(sol, kGauss);
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) worst = std::max(worst, std::abs(m[i] - sol.mass[i]));
  CHECK(worst < 1e-6);
}
