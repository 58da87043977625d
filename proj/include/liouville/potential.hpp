#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace liouville {

// V(r) = c
struct Constant {
  double c = 1.0;
};

// V(r) = r^n_pow * exp(-gamma * r^alpha_exp)
struct PowerGauss {
  double n_pow = 0.0;
  double gamma = 1.0;
  double alpha_exp = 2.0;
};

// V(r) = (1 + r^2)^l * exp(2 gamma / (1 + r^2)), the stereographic pull-back
// of a sphere weight.
struct Sphere {
  double l = -1.0;
  double gamma = 0.0;
};

// V(r) = -1/(8 pi beta) * 1[r <= alpha_cut] * r^-2 (-log r)^(-3/2), paired
// with beta = 1 / (4 log alpha_cut) < 0. Exact oracle potential with a
// logarithmic singularity at the origin and a jump at alpha_cut.
struct LogSingular {
  double alpha_cut = 0.5;
  double beta() const;
};

// Piecewise linear in log r. Constant below the first node; beyond the last
// node a power law continuing the final log-log slope (zero if the last
// value is zero).
struct Tabulated {
  std::vector<double> r;
  std::vector<double> v;
  std::string source;  // file path, kept for the descriptor
};

using PotentialForm = std::variant<Constant, PowerGauss, Sphere, LogSingular, Tabulated>;

struct ValueSlope {
  double value;
  double slope;  // dV/dr
};

// V >= c on r1 < r < r2.
struct Annulus {
  double c;
  double r1;
  double r2;
};

// Leading behaviour V(r) ~ coef * r^power * (-log r)^(-log_power) as r -> 0.
struct OriginBehaviour {
  double coef;
  double power;
  double log_power;
};

// Jump V(r+) - V(r-) at a radius; enters x . grad V as a delta.
struct Jump {
  double r;
  double delta;
};

struct Alpha {
  double value;  // +inf when every exponent qualifies
  bool approximate = false;
};

class Potential {
 public:
  Potential(PotentialForm form);  // NOLINT(google-explicit-constructor)

  static Potential load_table(const std::string& csv_path);

  const PotentialForm& form() const { return form_; }
  ValueSlope evaluate(double r) const;
  double value(double r) const { return evaluate(r).value; }

  Alpha alpha() const;
  OriginBehaviour origin() const;
  std::vector<Jump> jumps() const;
  std::optional<Annulus> positivity_annulus() const { return annulus_; }
  bool is_tabulated() const { return std::holds_alternative<Tabulated>(form_); }

  // Part of V that is a pure power r^k at every radius (PowerGauss n_pow);
  // shifting it into the ODE weight leaves a profile that may be monotone.
  double power_factor() const;
  // True when V / r^power_factor is non-increasing in r.
  bool residual_nonincreasing() const;
  // True when V / r^power_factor is constant.
  bool residual_constant() const;

  // Round-trips through parse_potential_spec().
  std::string descriptor() const;

 private:
  PotentialForm form_;
  std::optional<Annulus> annulus_;
};

// Mini-grammar "name:key=val,key=val" with names const, gauss, sphere,
// logsing and "table=path".
Potential parse_potential_spec(const std::string& spec);

struct ConditionCheck {
  bool pass = false;
  bool approximate = false;
  std::string detail;
};

struct ConditionReport {
  double beta = 0.0;
  double delta = 0.0;
  double weight_exponent = 0.0;
  ConditionCheck minimum_beta;      // beta >= -alpha(r^n V)
  ConditionCheck origin_integral;   // int_{D(0,1)} V+ |x|^{-beta-delta} < inf
  ConditionCheck outer_integral;    // int_{|x|>1} V+ |x|^{-beta+delta} < inf
  ConditionCheck negative_part;     // int_{|x|>1} V- |x|^{-2 beta} < inf
  ConditionCheck annulus;           // V >= C > 0 on some annulus
  bool all_pass() const;
};

// Structural existence hypotheses for the weight r^n V at a given beta.
ConditionReport check_conditions(const Potential& v, double beta, double delta,
                                 double weight_exponent = 0.0);

// Sampled check of the single-crossing uniqueness condition: for every
// 0 < c < n + 2 the sign of c V + r V' changes exactly once, from + to -.
bool uniqueness_condition_holds(const Potential& v, double weight_exponent, double r_lo = 1e-6,
                                double r_hi = 1e3, int samples = 2000);

}  // namespace liouville
