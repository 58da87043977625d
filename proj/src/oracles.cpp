#include "liouville/oracles.hpp"

#include <cmath>
#include <numbers>

#include "liouville/error.hpp"

namespace liouville {

NormalizedSolution conformal_bubble(double n_fam, double lambda, const Grid& grid) {
  if (!(n_fam > 0.0) || !(lambda > 0.0)) throw Error("conformal_bubble: n_fam and lambda must be positive");
  const double k = n_fam;
  NormalizedSolution sol{.beta = 2.0 * k, .n = 2.0 * (k - 1.0), .grid = grid};
  const std::size_t count = grid.size();
  sol.psi.resize(count);
  sol.dpsi.resize(count);
  sol.mass.resize(count);
  const double offset = std::log(k / std::numbers::pi) + 2.0 * k * std::log(lambda);
  for (std::size_t i = 0; i < count; ++i) {
    const double log_x = 2.0 * k * std::log(lambda * grid[i]);
    // log(1 + x) and x / (1 + x) without overflow.
    const double log1px = log_x > 0.0 ? log_x + std::log1p(std::exp(-log_x)) : std::log1p(std::exp(log_x));
    const double frac = 1.0 / (1.0 + std::exp(-log_x));
    sol.psi[i] = -2.0 * log1px + offset;
    sol.dpsi[i] = -4.0 * k * frac;
    sol.mass[i] = frac;
  }
  sol.psi0 = offset;
  sol.potential = Potential(Constant{1.0}).descriptor();
  sol.method = "oracle:bubble";
  return sol;
}

double bubble_lambda_for_shot(double n_fam, double s) {
  if (!(n_fam > 0.0)) throw Error("bubble_lambda_for_shot: n_fam must be positive");
  return std::exp((s - std::log(8.0 * n_fam * n_fam)) / (2.0 * n_fam));
}

SharpRegularity sharp_regularity_example(double alpha_cut, const Grid& grid) {
  if (!(alpha_cut > 0.0 && alpha_cut < 1.0)) throw Error("sharp_regularity_example: alpha_cut must lie in (0, 1)");
  const Potential v(LogSingular{alpha_cut});
  const double beta = LogSingular{alpha_cut}.beta();
  const Grid g = grid.with_node(alpha_cut);
  NormalizedSolution sol{.beta = beta, .n = 0.0, .grid = g};
  const std::size_t count = g.size();
  sol.psi.resize(count);
  sol.dpsi.resize(count);
  sol.mass.resize(count);
  const double l_alpha = -std::log(alpha_cut);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = g[i];
    if (r <= alpha_cut) {
      const double big_l = -std::log(r);
      sol.psi[i] = -0.5 * std::log(big_l);
      sol.dpsi[i] = 0.5 / big_l;
      sol.mass[i] = l_alpha / big_l;
    } else {
      sol.psi[i] = -std::log(r) / (2.0 * std::log(alpha_cut)) + 0.5 - 0.5 * std::log(l_alpha);
      sol.dpsi[i] = -1.0 / (2.0 * std::log(alpha_cut));
      sol.mass[i] = 1.0;
    }
  }
  sol.potential = v.descriptor();
  sol.method = "oracle:sharp-regularity";
  return SharpRegularity{v, std::move(sol)};
}

}  // namespace liouville
