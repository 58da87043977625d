#include "liouville/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "liouville/error.hpp"
#include "liouville/grid.hpp"

namespace liouville {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void validate_table(const Tabulated& t) {
  if (t.r.size() != t.v.size() || t.r.size() < 2) {
    throw Error("tabulated potential needs at least two (r, V) rows");
  }
  for (std::size_t i = 0; i < t.r.size(); ++i) {
    if (!(t.r[i] > 0.0) || !std::isfinite(t.r[i])) throw Error("tabulated potential: r must be positive");
    if (i > 0 && !(t.r[i] > t.r[i - 1])) throw Error("tabulated potential: r must increase");
    if (!(t.v[i] >= 0.0) || !std::isfinite(t.v[i])) {
      throw Error("tabulated potential: V must be finite and non-negative");
    }
  }
}

// Log-log slope of the last table segment, or nullopt when it is undefined.
std::optional<double> tail_slope(const Tabulated& t) {
  const std::size_t n = t.r.size();
  const double a = t.v[n - 2];
  const double b = t.v[n - 1];
  if (!(a > 0.0) || !(b > 0.0)) return std::nullopt;
  return (std::log(b) - std::log(a)) / (std::log(t.r[n - 1]) - std::log(t.r[n - 2]));
}

ValueSlope eval_table(const Tabulated& t, double r) {
  const std::size_t n = t.r.size();
  if (r <= t.r.front()) return {t.v.front(), 0.0};
  if (r >= t.r.back()) {
    if (t.v.back() == 0.0) return {0.0, 0.0};
    const auto k = tail_slope(t).value_or(0.0);
    const double v = t.v.back() * std::pow(r / t.r.back(), k);
    return {v, k * v / r};
  }
  const auto it = std::upper_bound(t.r.begin(), t.r.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - t.r.begin()) - 1;
  const double t0 = std::log(t.r[i]);
  const double t1 = std::log(t.r[i + 1]);
  const double dv = (t.v[i + 1] - t.v[i]) / (t1 - t0);
  (void)n;
  return {t.v[i] + dv * (std::log(r) - t0), dv / r};
}

double sampled_min(const Potential& p, double r1, double r2) {
  double lo = kInf;
  constexpr int kSamples = 257;
  for (int i = 0; i < kSamples; ++i) {
    const double r = r1 + (r2 - r1) * i / (kSamples - 1.0);
    lo = std::min(lo, p.value(r));
  }
  return lo;
}

}  // namespace

double LogSingular::beta() const { return 1.0 / (4.0 * std::log(alpha_cut)); }

Potential::Potential(PotentialForm form) : form_(std::move(form)) {
  std::visit(Overloaded{
                 [](const Constant& c) {
                   if (!(c.c >= 0.0) || !std::isfinite(c.c)) throw Error("const potential: c must be >= 0");
                 },
                 [](const PowerGauss& g) {
                   if (!(g.gamma >= 0.0)) throw Error("gauss potential: gamma must be >= 0");
                   if (!(g.alpha_exp > 0.0)) throw Error("gauss potential: alpha must be > 0");
                   if (!std::isfinite(g.n_pow)) throw Error("gauss potential: npow must be finite");
                 },
                 [](const Sphere& s) {
                   if (!(s.gamma >= 0.0)) throw Error("sphere potential: gamma must be >= 0");
                   if (!std::isfinite(s.l)) throw Error("sphere potential: l must be finite");
                 },
                 [](const LogSingular& s) {
                   if (!(s.alpha_cut > 0.0 && s.alpha_cut < 1.0)) {
                     throw Error("logsing potential: alpha must lie in (0, 1)");
                   }
                 },
                 [](const Tabulated& t) { validate_table(t); },
             },
             form_);

  // Positivity certificate.
  std::visit(Overloaded{
                 [&](const Constant& c) {
                   if (c.c > 0.0) annulus_ = Annulus{c.c, 0.5, 1.0};
                 },
                 [&](const PowerGauss&) { annulus_ = Annulus{0.999 * sampled_min(*this, 0.5, 1.0), 0.5, 1.0}; },
                 [&](const Sphere&) { annulus_ = Annulus{0.999 * sampled_min(*this, 0.5, 1.0), 0.5, 1.0}; },
                 [&](const LogSingular& s) {
                   const double r1 = 0.25 * s.alpha_cut;
                   const double r2 = 0.5 * s.alpha_cut;
                   annulus_ = Annulus{0.999 * sampled_min(*this, r1, r2), r1, r2};
                 },
                 [&](const Tabulated& t) {
                   double best = 0.0;
                   for (std::size_t i = 0; i + 1 < t.r.size(); ++i) {
                     const double c = std::min(t.v[i], t.v[i + 1]);
                     if (c > best) {
                       best = c;
                       annulus_ = Annulus{c, t.r[i], t.r[i + 1]};
                     }
                   }
                 },
             },
             form_);
  if (annulus_ && !(annulus_->c > 0.0)) annulus_.reset();
}

Potential Potential::load_table(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw Error("cannot open potential table '" + csv_path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error("potential table '" + csv_path + "' is empty");
  line.erase(std::remove_if(line.begin(), line.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); }),
             line.end());
  if (line != "r,V") throw Error("potential table '" + csv_path + "' must start with header r,V");
  Tabulated t;
  t.source = csv_path;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
      throw Error("potential table row " + std::to_string(row) + ": expected two columns");
    }
    try {
      t.r.push_back(std::stod(a));
      t.v.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw Error("potential table row " + std::to_string(row) + ": not a number");
    }
  }
  return Potential(std::move(t));
}

ValueSlope Potential::evaluate(double r) const {
  if (!(r >= 0.0)) throw Error("potential evaluated at negative radius");
  return std::visit(
      Overloaded{
          [](const Constant& c) { return ValueSlope{c.c, 0.0}; },
          [r](const PowerGauss& g) -> ValueSlope {
            if (r == 0.0) {
              if (g.n_pow < 0.0) throw Error("gauss potential with negative npow is singular at r = 0");
              if (g.n_pow > 0.0) {
                const double slope = g.n_pow > 1.0 ? 0.0 : (g.n_pow == 1.0 ? 1.0 : kInf);
                return {0.0, slope};
              }
              double slope = 0.0;
              if (g.gamma > 0.0) {
                slope = g.alpha_exp > 1.0 ? 0.0 : (g.alpha_exp == 1.0 ? -g.gamma : -kInf);
              }
              return {1.0, slope};
            }
            const double ra = std::pow(r, g.alpha_exp);
            const double v = std::exp(g.n_pow * std::log(r) - g.gamma * ra);
            return {v, v * (g.n_pow - g.gamma * g.alpha_exp * ra) / r};
          },
          [r](const Sphere& s) -> ValueSlope {
            const double u = 1.0 + r * r;
            const double v = std::pow(u, s.l) * std::exp(2.0 * s.gamma / u);
            return {v, v * (2.0 * s.l * r / u - 4.0 * s.gamma * r / (u * u))};
          },
          [r](const LogSingular& s) -> ValueSlope {
            if (r == 0.0) throw Error("logsing potential is singular at r = 0");
            if (r > s.alpha_cut) return {0.0, 0.0};
            const double big_l = -std::log(r);
            const double c = -1.0 / (8.0 * kPi * s.beta());
            const double v = c / (r * r * big_l * std::sqrt(big_l));
            return {v, v * (-2.0 + 1.5 / big_l) / r};
          },
          [r](const Tabulated& t) { return eval_table(t, r); },
      },
      form_);
}

Alpha Potential::alpha() const {
  return std::visit(Overloaded{
                        [](const Constant& c) { return Alpha{c.c == 0.0 ? kInf : -1.0}; },
                        [](const PowerGauss& g) {
                          return Alpha{g.gamma > 0.0 ? kInf : -(g.n_pow + 2.0) / 2.0};
                        },
                        [](const Sphere& s) { return Alpha{-s.l - 1.0}; },
                        [](const LogSingular&) { return Alpha{kInf}; },
                        [](const Tabulated& t) {
                          if (t.v.back() == 0.0) return Alpha{kInf, true};
                          const double k = tail_slope(t).value_or(0.0);
                          return Alpha{-(k + 2.0) / 2.0, true};
                        },
                    },
                    form_);
}

OriginBehaviour Potential::origin() const {
  return std::visit(Overloaded{
                        [](const Constant& c) { return OriginBehaviour{c.c, 0.0, 0.0}; },
                        [](const PowerGauss& g) { return OriginBehaviour{1.0, g.n_pow, 0.0}; },
                        [](const Sphere& s) { return OriginBehaviour{std::exp(2.0 * s.gamma), 0.0, 0.0}; },
                        [](const LogSingular& s) {
                          return OriginBehaviour{-1.0 / (8.0 * kPi * s.beta()), -2.0, 1.5};
                        },
                        [](const Tabulated& t) { return OriginBehaviour{t.v.front(), 0.0, 0.0}; },
                    },
                    form_);
}

std::vector<Jump> Potential::jumps() const {
  if (const auto* s = std::get_if<LogSingular>(&form_)) {
    return {Jump{s->alpha_cut, -value(s->alpha_cut)}};
  }
  return {};
}

double Potential::power_factor() const {
  if (const auto* g = std::get_if<PowerGauss>(&form_)) return g->n_pow;
  return 0.0;
}

bool Potential::residual_nonincreasing() const {
  return std::visit(Overloaded{
                        [](const Constant&) { return true; },
                        [](const PowerGauss& g) { return g.gamma >= 0.0; },
                        [](const Sphere& s) { return s.l <= 0.0 && s.gamma >= 0.0; },
                        [](const LogSingular&) { return false; },
                        [](const Tabulated& t) {
                          for (std::size_t i = 1; i < t.v.size(); ++i) {
                            if (t.v[i] > t.v[i - 1]) return false;
                          }
                          return true;
                        },
                    },
                    form_);
}

bool Potential::residual_constant() const {
  return std::visit(Overloaded{
                        [](const Constant&) { return true; },
                        [](const PowerGauss& g) { return g.gamma == 0.0; },
                        [](const Sphere& s) { return s.l == 0.0 && s.gamma == 0.0; },
                        [](const LogSingular&) { return false; },
                        [](const Tabulated& t) {
                          return std::all_of(t.v.begin(), t.v.end(), [&](double x) { return x == t.v.front(); });
                        },
                    },
                    form_);
}

std::string Potential::descriptor() const {
  return std::visit(Overloaded{
                        [](const Constant& c) { return "const:c=" + fmt(c.c); },
                        [](const PowerGauss& g) {
                          return "gauss:npow=" + fmt(g.n_pow) + ",gamma=" + fmt(g.gamma) +
                                 ",alpha=" + fmt(g.alpha_exp);
                        },
                        [](const Sphere& s) { return "sphere:l=" + fmt(s.l) + ",gamma=" + fmt(s.gamma); },
                        [](const LogSingular& s) { return "logsing:alpha=" + fmt(s.alpha_cut); },
                        [](const Tabulated& t) { return "table=" + t.source; },
                    },
                    form_);
}

Potential parse_potential_spec(const std::string& spec) {
  const auto bad = [&](const std::string& why) {
    return Error("malformed potential spec '" + spec + "': " + why);
  };
  if (spec.rfind("table=", 0) == 0) {
    const std::string path = spec.substr(6);
    if (path.empty()) throw bad("missing table path");
    return Potential::load_table(path);
  }
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::istringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw bad("expected key=val, got '" + item + "'");
      const std::string key = item.substr(0, eq);
      std::size_t used = 0;
      double val = 0.0;
      try {
        val = std::stod(item.substr(eq + 1), &used);
      } catch (const std::exception&) {
        throw bad("value of '" + key + "' is not a number");
      }
      if (used != item.size() - eq - 1) throw bad("value of '" + key + "' is not a number");
      if (!kv.emplace(key, val).second) throw bad("duplicate key '" + key + "'");
    }
  }
  const auto take = [&](std::initializer_list<std::pair<const char*, double>> keys) {
    std::map<std::string, double> out;
    for (const auto& [k, def] : keys) {
      const auto it = kv.find(k);
      out[k] = it == kv.end() ? def : it->second;
      if (it != kv.end()) kv.erase(it);
    }
    if (!kv.empty()) throw bad("unknown key '" + kv.begin()->first + "' for '" + name + "'");
    return out;
  };
  if (name == "const") {
    auto p = take({{"c", 1.0}});
    return Potential(Constant{p["c"]});
  }
  if (name == "gauss") {
    auto p = take({{"npow", 0.0}, {"gamma", 1.0}, {"alpha", 2.0}});
    return Potential(PowerGauss{p["npow"], p["gamma"], p["alpha"]});
  }
  if (name == "sphere") {
    auto p = take({{"l", -1.0}, {"gamma", 0.0}});
    return Potential(Sphere{p["l"], p["gamma"]});
  }
  if (name == "logsing") {
    if (!kv.count("alpha")) throw bad("logsing needs alpha");
    auto p = take({{"alpha", 0.5}});
    return Potential(LogSingular{p["alpha"]});
  }
  throw bad("unknown potential '" + name + "'");
}

bool ConditionReport::all_pass() const {
  return minimum_beta.pass && origin_integral.pass && outer_integral.pass && negative_part.pass &&
         annulus.pass;
}

namespace {

// Probes convergence of int g over shrinking (origin) or growing (outer)
// ranges; an integral is declared finite when successive increments shrink.
ConditionCheck probe_integral(const Potential& v, double exponent, bool origin) {
  // integrand in r: V(r) r^{exponent}
  const auto segment = [&](double a, double b) {
    const Grid g = Grid::log_spaced(a, b, 2048);
    std::vector<double> s(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) s[i] = v.value(g[i]) * std::pow(g[i], exponent - 1.0);
    return integrate_radial(g, s, OriginModel{}) - origin_cell(s[0], g[0], OriginModel{});
  };
  double inc[3];
  if (origin) {
    inc[0] = segment(1e-3, 1.0);
    inc[1] = segment(1e-6, 1e-3);
    inc[2] = segment(1e-9, 1e-6);
  } else {
    inc[0] = segment(1.0, 1e3);
    inc[1] = segment(1e3, 1e6);
    inc[2] = segment(1e6, 1e9);
  }
  ConditionCheck c;
  c.approximate = true;
  c.pass = inc[2] <= 0.5 * inc[1] + 1e-14 && inc[1] <= 0.5 * inc[0] + 1e-14;
  c.detail = "quadrature probe increments " + fmt(inc[0]) + ", " + fmt(inc[1]) + ", " + fmt(inc[2]);
  return c;
}

}  // namespace

ConditionReport check_conditions(const Potential& v, double beta, double delta, double n) {
  if (!(delta > 0.0)) throw Error("check_conditions: delta must be positive");
  ConditionReport rep;
  rep.beta = beta;
  rep.delta = delta;
  rep.weight_exponent = n;

  const Alpha a = v.alpha();
  const double alpha_eff = std::isinf(a.value) ? a.value : a.value - 0.5 * n;
  rep.minimum_beta.pass = beta >= -alpha_eff;
  rep.minimum_beta.approximate = a.approximate;
  rep.minimum_beta.detail = "alpha(r^n V) = " + fmt(alpha_eff);

  if (v.is_tabulated()) {
    rep.origin_integral = probe_integral(v, n - beta - delta + 2.0, true);
    rep.outer_integral = probe_integral(v, n - beta + delta + 2.0, false);
  } else {
    const OriginBehaviour o = v.origin();
    const double e = o.power + n - beta - delta + 2.0;
    rep.origin_integral.pass = o.coef == 0.0 || e > 0.0 || (e == 0.0 && o.log_power > 1.0);
    rep.origin_integral.detail = "local exponent " + fmt(e);
    rep.outer_integral.pass = 0.5 * (-beta + delta) < alpha_eff;
    rep.outer_integral.detail = "needs (delta - beta)/2 < alpha(r^n V) = " + fmt(alpha_eff);
  }
  rep.negative_part.pass = true;
  rep.negative_part.detail = "V >= 0";
  if (const auto ann = v.positivity_annulus()) {
    rep.annulus.pass = true;
    rep.annulus.detail = "V >= " + fmt(ann->c) + " on (" + fmt(ann->r1) + ", " + fmt(ann->r2) + ")";
  } else {
    rep.annulus.detail = "no positivity annulus";
  }
  return rep;
}

bool uniqueness_condition_holds(const Potential& v, double n, double r_lo, double r_hi, int samples) {
  const double top = n + 2.0;
  double prev = -kInf;
  double first = 0.0;
  double last = 0.0;
  bool have = false;
  for (int i = 0; i < samples; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (samples - 1));
    const auto [val, slope] = v.evaluate(r);
    if (!(val > 1e-300)) {
      // V vanished: c V + r V' = r V' must stay <= 0 from here on.
      if (slope > 0.0) return false;
      last = kInf;
      continue;
    }
    const double kappa = -r * slope / val;
    if (!have) {
      first = kappa;
      have = true;
    }
    const double clamped = std::clamp(kappa, 0.0, top);
    if (clamped + 1e-12 < prev) return false;
    prev = clamped;
    last = std::max(last, kappa);
  }
  return have && first <= 1e-9 && last >= top;
}

}  // namespace liouville
