#include <doctest.h>

#include <cmath>
#include <numbers>

#include "liouville/error.hpp"
#include "liouville/oracles.hpp"
#include "liouville/verify.hpp"

using namespace liouville;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("bubble closed form") {
  const Grid g = Grid::make(1e3, 150000, Grading::Log);
  const NormalizedSolution b = conformal_bubble(1.0, 1.0, g);
  CHECK(b.beta == 2.0);
  CHECK(b.n == 0.0);
  CHECK(b.psi0 == doctest::Approx(-std::log(kPi)).epsilon(1e-15));
  CHECK(b.psi0 == doctest::Approx(-1.1447299).epsilon(1e-7));

  std::vector<double> density(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) density[i] = std::exp(b.psi[i]);
  // Mass outside r = 1000 is 1 / (1 + 1e6).
  CHECK(std::abs(integrate_radial(g, density) + 1.0 / (1.0 + 1e6) - 1.0) < 1e-8);

  const NormalizedSolution c = conformal_bubble(2.0, 3.0, g);
  CHECK(std::abs(c.dpsi.back() + 8.0) < 1e-4);
}

TEST_CASE("bubbles pass the identity checks") {
  for (double k : {1.0, 2.0, 1.5}) {
    const Grid g = Grid::make(1e4, 80000, Grading::Log);
    const NormalizedSolution b = conformal_bubble(k, 0.8, g);
    // Weight |x|^{2(k-1)} lives in the solution's exponent n, V = 1.
    const IdentityReport rep = check_identities(b, Potential(Constant{1.0}));
    INFO("k = " << k);
    CHECK(rep.mass_residual < 1e-6);
    CHECK(rep.flux_residual < 1e-6);
    CHECK(rep.pokhozhaev_residual < 1e-6);
    CHECK(rep.log_lip_ok);
    CHECK(rep.grad_bound_ok);
  }
}

TEST_CASE("bubble solves the ODE") {
  // psi'' + psi'/r + 4 pi beta r^{2(k-1)} e^psi = 0 with the closed-form derivatives.
  for (double k : {1.0, 2.0}) {
    const double lambda = 1.7;
    const double beta = 2.0 * k;
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double r = 1e-3 * std::pow(1e6, i / 200.0);
      const double x = std::pow(lambda * r, 2.0 * k);
      const double psi = -2.0 * std::log1p(x) + std::log(k / kPi) + 2.0 * k * std::log(lambda);
      // r psi' = -4 k x / (1 + x), so (r psi')' / r = Laplace psi.
      const double lap = -8.0 * k * k * x / ((1.0 + x) * (1.0 + x)) / (r * r);
      const double forcing = 4.0 * kPi * beta * std::pow(r, 2.0 * (k - 1.0)) * std::exp(psi);
      worst = std::max(worst, std::abs(lap + forcing) / forcing);
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("sharp regularity example") {
  const double a = std::exp(-1.0);
  const SharpRegularity ex = sharp_regularity_example(a, Grid::make(10.0, 20000, Grading::Log));
  const NormalizedSolution& sol = ex.solution;
  CHECK(sol.beta == doctest::Approx(-0.25).epsilon(1e-15));
  bool found = false;
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    if (sol.grid[i] == a) {
      found = true;
      CHECK(sol.psi[i] == -0.5 * std::log(-std::log(a)));
    }
  }
  CHECK(found);
  const IdentityReport rep = check_identities(sol, ex.potential);
  CHECK(rep.mass_residual < 1e-6);
  CHECK(rep.flux_residual < 1e-6);
  CHECK(rep.slope_at_infinity < 1e-12);
  CHECK_THROWS_AS(sharp_regularity_example(1.5, Grid::make(10.0, 100, Grading::Log)), Error);
  CHECK_THROWS_AS(sharp_regularity_example(0.0, Grid::make(10.0, 100, Grading::Log)), Error);
}

TEST_CASE("bubble scale from a shot") {
  // psi(0) of the unnormalized shot: log(8 k^2) + 2 k log(lambda).
  const double lambda = bubble_lambda_for_shot(2.0, std::log(32.0) + 4.0 * std::log(1.5));
  CHECK(lambda == doctest::Approx(1.5).epsilon(1e-14));
  CHECK_THROWS_AS(conformal_bubble(0.0, 1.0, Grid::make(1.0, 100, Grading::Log)), Error);
}
