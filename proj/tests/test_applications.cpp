#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "liouville/applications.hpp"
#include "liouville/error.hpp"

using namespace liouville;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("css inside the window is solved") {
  const AppOutcome o = solve_app(Css{1, 2.0, 1.0});
  CHECK(o.problem.verdict == Verdict::Inside);
  CHECK(o.problem.n_eq == 2.0);
  REQUIRE(o.solution.has_value());
  CHECK(std::abs(o.solution->mass.back() + o.solution->tail_mass - 1.0) < 1e-6);
  CHECK(o.report->flux_residual < 1e-6 * 3.0);
  CHECK(o.problem.v.value(1.0) == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("css outside the window has no solution") {
  const AppOutcome eq = solve_app(Css{0, 2.0, 1.0});
  CHECK(eq.nonexistence);
  CHECK_FALSE(eq.solution.has_value());
  const AppOutcome out = solve_app(Css{0, 3.0, 1.0});
  CHECK(out.problem.verdict == Verdict::Outside);
  CHECK(out.nonexistence);
  CHECK(out.message.find("2n > beta - 2") != std::string::npos);
}

TEST_CASE("sphere window") {
  const AppOutcome o = solve_app(SphericalOnsager{0.0, -1.0, 0.0, 1.0});
  CHECK(o.problem.verdict == Verdict::Inside);
  REQUIRE(o.solution.has_value());
  CHECK(o.report->mass_residual < 1e-6);
  CHECK(derive_problem(SphericalOnsager{0.0, -1.0, 0.0, 2.5}).verdict == Verdict::Outside);
  // Below the window with gamma <= -l/2 the index formula rules existence out.
  CHECK(derive_problem(SphericalOnsager{2.0, -1.0, 0.0, 1.5}).verdict == Verdict::Outside);
  // With gamma > -l/2 necessity is open.
  const AppProblem open = derive_problem(SphericalOnsager{2.0, -1.0, 2.0, 1.5});
  CHECK(open.verdict == Verdict::Boundary);
  CHECK(open.annotation.find("open") != std::string::npos);
  // 2 beta >= n + 2 + 2l always.
  CHECK(derive_problem(SphericalOnsager{2.0, -1.0, 2.0, 0.8}).verdict == Verdict::Outside);
}

TEST_CASE("onsager presets") {
  const AppProblem p = derive_problem(Onsager{1.0, 1.0, 2.0, -4.0 * kPi});
  CHECK(p.beta_eq == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.verdict == Verdict::Inside);
  const AppOutcome o = solve_app(Onsager{1.0, 1.0, 2.0, -4.0 * kPi});
  CHECK(o.solution.has_value());

  const AppProblem b = derive_problem(Onsager{0.0, 1.0, 2.0, -8.0 * kPi});
  CHECK(b.beta_eq == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(b.verdict == Verdict::Boundary);
  CHECK_FALSE(b.annotation.empty());

  // Positive statistical temperature gives beta_eq < 0.
  const AppOutcome neg = solve_app(Onsager{0.0, 1.0, 2.0, 2.0 * kPi});
  CHECK(neg.problem.beta_eq == doctest::Approx(-0.5));
  REQUIRE(neg.solution.has_value());
  CHECK(neg.report->mass_residual < 1e-6);
}

TEST_CASE("randomized window verdicts agree with the inequalities") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> pick_n(0, 5);
  std::uniform_real_distribution<double> pick(-6.0, 14.0);
  std::uniform_real_distribution<double> pick_l(-4.0, 0.0);
  for (int i = 0; i < 20; ++i) {
    const int n = pick_n(rng);
    const double beta = pick(rng);
    const Verdict v = derive_problem(Css{n, beta, 1.0 + i}).verdict;
    CHECK((v == Verdict::Inside) == (2.0 * n > beta - 2.0));
    CHECK((v == Verdict::Outside) == (2.0 * n < beta - 2.0));
  }
  for (int i = 0; i < 200; ++i) {
    const double n = pick_n(rng);
    const double bs = 4.0 * kPi * pick(rng);
    const Verdict v = derive_problem(Onsager{n, 1.0, 2.0, bs}).verdict;
    CHECK((v == Verdict::Inside) == (n > (-bs - 8.0 * kPi) / (4.0 * kPi)));

    const double l = pick_l(rng);
    const double beta = pick(rng);
    const Verdict s = derive_problem(SphericalOnsager{n, l, 0.3, beta}).verdict;
    CHECK((s == Verdict::Inside) == (n + 2.0 + 2.0 * l < beta && beta < n + 2.0));
  }
}

TEST_CASE("css field scaling") {
  CHECK(css_scaling_check(1, 2.0, 1.0, 4.0) < 1e-4);
  CHECK(css_scaling_check(1, 2.0, 1.0, 1.0) == 0.0);
  CHECK(css_scaling_check(2, 3.0, 0.5, 3.0) < 1e-4);
  CHECK_THROWS_AS(css_scaling_check(0, 3.0, 1.0, 4.0), NonexistenceError);
  CHECK_THROWS_AS(css_scaling_check(1, 2.0, -1.0, 4.0), Error);

  AppControls loose;
  loose.shoot.abs_tol = 1e-6;
  loose.shoot.rel_tol = 1e-5;
  AppControls tight;
  tight.shoot.abs_tol = 1e-11;
  tight.shoot.rel_tol = 1e-10;
  CHECK(css_scaling_check(1, 2.0, 1.0, 4.0, tight) <= css_scaling_check(1, 2.0, 1.0, 4.0, loose));
}

TEST_CASE("strong-field trichotomy") {
  CHECK(css_strong_field_regime(1, 2.0).rfind("(ii) If n+1=beta", 0) == 0);
  CHECK(css_strong_field_regime(2, 2.0).rfind("(i) ", 0) == 0);
  CHECK(css_strong_field_regime(0, 1.5).rfind("(iii) ", 0) == 0);
}

TEST_CASE("temperature scan") {
  CHECK_THROWS_AS(onsager_temperature_scan(0.0, 1.0, 2.0, {}), Error);
  const std::vector<double> temps{-4.0 * kPi, -8.0 * kPi, -8.0 * kPi * (1.0 - 1e-9), -10.0 * kPi};
  AppControls c;
  c.concentration_psi0 = 15.0;
  const auto rows = onsager_temperature_scan(0.0, 1.0, 2.0, temps, c);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].solved);
  CHECK(rows[0].beta_eq == doctest::Approx(1.0));
  CHECK_FALSE(rows[0].concentration);
  CHECK(rows[1].verdict == Verdict::Boundary);
  CHECK_FALSE(rows[1].solved);
  CHECK(rows[2].solved);
  CHECK(rows[2].psi0 > rows[0].psi0);
  CHECK(rows[2].concentration);
  CHECK(rows[3].verdict == Verdict::Outside);

  const auto path = std::filesystem::temp_directory_path() / "liouville_scan.csv";
  write_scan_csv(rows, path.string());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "param,verdict,psi0,mass_inner,beta_eq");
}
