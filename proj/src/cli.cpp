#include "liouville/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "liouville/applications.hpp"
#include "liouville/error.hpp"
#include "liouville/kernels.hpp"
#include "liouville/oracles.hpp"
#include "liouville/plot_svg.hpp"
#include "liouville/run_config.hpp"
#include "liouville/shooting.hpp"
#include "liouville/variational.hpp"
#include "liouville/verify.hpp"

namespace liouville::cli {

namespace {

namespace fs = std::filesystem;

// Console numbers use 6 significant digits.
std::string g6(double x) {
  std::ostringstream ss;
  ss << std::setprecision(6) << x;
  return ss.str();
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void ensure_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

std::map<std::string, double> residual_map(const IdentityReport& r) {
  return {{"mass_residual", r.mass_residual},
          {"flux_residual", r.flux_residual},
          {"slope_at_infinity", r.slope_at_infinity},
          {"pokhozhaev_residual", r.pokhozhaev_residual},
          {"P_min", r.P_min}};
}

void print_report(std::ostream& out, const IdentityReport& r) {
  out << "  mass residual        " << g6(r.mass_residual) << '\n'
      << "  flux residual        " << g6(r.flux_residual) << '\n'
      << "  slope at infinity    " << g6(r.slope_at_infinity) << '\n'
      << "  pokhozhaev residual  " << g6(r.pokhozhaev_residual) << '\n'
      << "  P min                " << g6(r.P_min) << '\n';
}

void print_flags(std::ostream& out, const std::vector<std::string>& flags) {
  for (const std::string& f : flags) out << "  flag: " << f << '\n';
}

struct ToleranceOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double tail_tol = 1e-8;
  std::size_t nodes = 32768;

  void attach(CLI::App* app) {
    app->add_option("--abs-tol", abs_tol, "ODE absolute tolerance")->check(CLI::PositiveNumber);
    app->add_option("--rel-tol", rel_tol, "ODE relative tolerance")->check(CLI::PositiveNumber);
    app->add_option("--tail-tol", tail_tol, "relative tail mass at truncation")->check(CLI::PositiveNumber);
    app->add_option("--nodes", nodes, "output nodes")->check(CLI::Range(64ul, 1ul << 24));
  }
  ShootControls shoot(double beta) const {
    ShootControls c;
    c.abs_tol = abs_tol;
    c.rel_tol = rel_tol;
    c.tail_tol = tail_tol;
    c.n_nodes = nodes;
    c.sign = beta < 0.0 ? -1 : 1;
    return c;
  }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cell.size()) throw Error("malformed number '" + cell + "' in list");
    out.push_back(x);
  }
  if (out.empty()) throw Error("empty list");
  return out;
}

void write_solution(std::ostream& out, const NormalizedSolution& sol, const IdentityReport& rep,
                    const std::string& path) {
  if (path.empty()) return;
  ensure_parent(path);
  save_solution(sol, path, residual_map(rep));
  out << "wrote " << path << " and " << csv_path_for(path) << '\n';
}

int do_solve(std::ostream& out, const std::string& method, double beta, double n, const std::string& spec,
             const std::string& path, const ToleranceOptions& tol, double radius, bool refine, std::size_t vnodes) {
  const Potential v = parse_potential_spec(spec);
  NormalizedSolution sol = [&] {
    if (method == "shooting") return solve_for_beta(v, n, beta, std::nullopt, tol.shoot(beta)).solution;
    if (auto why = analytic_nonexistence(v, n, beta)) {
      throw NonexistenceError("threshold n > beta - 2 violated (" + *why + ")");
    }
    MinimizeControls mc;
    mc.n_nodes = vnodes;
    VariationalSolve vs = solve_variational(v, n, beta, radius, refine, mc);
    out << "variational: " << vs.minimizer.iterations << " iterations, grad norm " << g6(vs.minimizer.grad_norm)
        << (vs.minimizer.converged ? "" : " (not converged)") << '\n';
    return std::move(vs.solution);
  }();
  const IdentityReport rep = check_identities(sol, v);
  out << "solved beta = " << g6(sol.beta) << ", n = " << g6(sol.n) << ", psi(0) = " << g6(sol.psi0)
      << ", r_max = " << g6(sol.r_max()) << '\n';
  print_report(out, rep);
  print_flags(out, sol.flags);
  print_flags(out, rep.flags);
  write_solution(out, sol, rep, path);
  return kExitOk;
}

int do_scan(std::ostream& out, double n, const std::string& spec, double s_min, double s_max, int count, int sign,
            const std::string& path, const ToleranceOptions& tol) {
  if (count < 2) throw Error("scan: need at least 2 points");
  if (!(s_min < s_max)) throw Error("scan: need s-min < s-max");
  const Potential v = parse_potential_spec(spec);
  std::vector<double> s(count);
  for (int i = 0; i < count; ++i) s[i] = s_min + (s_max - s_min) * i / (count - 1);
  ShootControls c = tol.shoot(sign);
  c.samples = false;
  const std::vector<MassMapEntry> map = mass_map(v, n, s, c);
  std::ostringstream csv;
  csv << "s,ok,beta,beta_prime,beta_prime_fd\n";
  double lo = INFINITY, hi = -INFINITY;
  int failed = 0;
  for (const MassMapEntry& e : map) {
    csv << g17(e.s) << ',' << (e.ok ? 1 : 0) << ',' << (e.ok ? g17(e.beta) : "nan") << ','
        << (e.ok ? g17(e.beta_prime) : "nan") << ',' << (e.beta_prime_fd ? g17(*e.beta_prime_fd) : "nan") << '\n';
    if (e.ok) {
      lo = std::min(lo, e.beta);
      hi = std::max(hi, e.beta);
    } else {
      ++failed;
    }
  }
  out << "scanned " << count << " values of s: beta in [" << g6(lo) << ", " << g6(hi) << "]";
  if (failed) out << ", " << failed << " shots failed";
  out << '\n';
  if (path.empty()) {
    out << csv.str();
  } else {
    ensure_parent(path);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << csv.str();
    out << "wrote " << path << '\n';
  }
  return kExitOk;
}

int do_find(std::ostream& out, double beta, double n, const std::string& spec, const std::vector<double>& bracket,
            const std::string& path, const ToleranceOptions& tol) {
  const Potential v = parse_potential_spec(spec);
  std::optional<std::pair<double, double>> br;
  if (!bracket.empty()) {
    if (bracket.size() != 2) throw Error("find: --bracket takes two values");
    br = std::make_pair(bracket[0], bracket[1]);
  }
  const SolveResult r = solve_for_beta(v, n, beta, br, tol.shoot(beta));
  const IdentityReport rep = check_identities(r.solution, v);
  out << "root s* = " << g6(r.shot.s) << ", beta(s*) = " << g6(r.shot.beta_s) << ", beta'(s*) = "
      << g6(r.shot.beta_prime_s) << ", iterations " << r.iterations << '\n';
  print_report(out, rep);
  print_flags(out, r.solution.flags);
  write_solution(out, r.solution, rep, path);
  return kExitOk;
}

int do_verify(std::ostream& out, const std::string& path, const std::string& spec, const std::string& report_path) {
  const NormalizedSolution sol = load_solution(path);
  const std::string descriptor = spec.empty() ? sol.potential : spec;
  if (descriptor.empty()) throw Error("verify: solution has no potential descriptor; pass --potential");
  const Potential v = parse_potential_spec(descriptor);
  const IdentityReport rep = check_identities(sol, v);
  const std::string json = to_json(rep);
  if (!report_path.empty()) {
    ensure_parent(report_path);
    std::ofstream f(report_path, std::ios::binary);
    if (!f) throw Error("cannot write '" + report_path + "'");
    f << json << '\n';
  }
  out << json << '\n';
  return kExitOk;
}

void print_app(std::ostream& out, const AppOutcome& o) {
  out << "window: " << to_string(o.problem.verdict) << " (" << o.problem.inequality << ")\n";
  out << "core problem: beta = " << g6(o.problem.beta_eq) << ", n = " << g6(o.problem.n_eq)
      << ", V = " << o.problem.v.descriptor() << '\n';
  if (!o.problem.annotation.empty()) out << "  note: " << o.problem.annotation << '\n';
  if (o.solution) {
    out << "solved: psi(0) = " << g6(o.solution->psi0) << '\n';
    print_report(out, *o.report);
    print_flags(out, o.solution->flags);
  }
}

int finish_app(std::ostream& out, const AppOutcome& o, const std::string& path) {
  print_app(out, o);
  if (o.nonexistence) {
    out << o.message << '\n';
    return kExitNonexistence;
  }
  write_solution(out, *o.solution, *o.report, path);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = args_in;
  // A leading "--config FILE" replaces the command line by the file's contents.
  if (args.size() >= 2 && args[0] == "--config") {
    try {
      const RunConfig cfg = RunConfig::load(args[1]);
      std::vector<std::string> rest(args.begin() + 2, args.end());
      args = cfg.to_args();
      args.insert(args.end(), rest.begin(), rest.end());
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kExitError;
    }
  }

  CLI::App app{"Radial solver for -Laplace(psi) = 4 pi beta |x|^n V e^psi with unit mass", "liouville"};
  app.require_subcommand(1);
  std::string simd = "auto";
  app.add_option("--simd", simd, "kernel implementation")->check(CLI::IsMember({"auto", "scalar", "avx2"}));
  std::string save_config;
  app.add_option("--save-config", save_config, "write the subcommand options as a key=value config file");

  ToleranceOptions tol;
  double beta = 1.0, n = 0.0;
  std::string spec = "gauss:gamma=1,alpha=2";
  std::string out_path;

  auto* solve = app.add_subcommand("solve", "solve the normalized problem and write JSON + CSV");
  std::string method = "shooting";
  double radius = 12.0;
  bool refine = false;
  std::size_t vnodes = 4096;
  solve->add_option("--method", method, "backend")->check(CLI::IsMember({"shooting", "variational"}));
  solve->add_option("--beta", beta)->required();
  solve->add_option("--n", n, "weight exponent")->check(CLI::NonNegativeNumber);
  solve->add_option("--potential", spec, "potential spec name:key=val,...");
  solve->add_option("--out", out_path, "solution header path (.json)");
  solve->add_option("--radius", radius, "variational disk radius")->check(CLI::Range(1.0 + 1e-9, 1e6));
  solve->add_flag("--refine", refine, "variational: double the radius until psi(0) settles");
  solve->add_option("--var-nodes", vnodes, "variational nodes")->check(CLI::Range(64ul, 1ul << 22));
  tol.attach(solve);

  auto* scan = app.add_subcommand("scan", "sweep beta(s) over psi(0) = s and write CSV");
  double s_min = -5.0, s_max = 25.0;
  int count = 31, sign = 1;
  scan->add_option("--n", n)->check(CLI::NonNegativeNumber);
  scan->add_option("--potential", spec);
  scan->add_option("--s-min", s_min);
  scan->add_option("--s-max", s_max);
  scan->add_option("--count", count)->check(CLI::Range(2, 100000));
  scan->add_option("--sign", sign, "sign of beta")->check(CLI::IsMember({-1, 1}));
  scan->add_option("--out", out_path, "CSV path (stdout when empty)");
  tol.attach(scan);

  auto* find = app.add_subcommand("find", "find s with beta(s) = target");
  std::vector<double> bracket;
  find->add_option("--beta", beta)->required();
  find->add_option("--n", n)->check(CLI::NonNegativeNumber);
  find->add_option("--potential", spec);
  find->add_option("--bracket", bracket, "s_lo s_hi")->expected(2);
  find->add_option("--out", out_path);
  tol.attach(find);

  auto* verify = app.add_subcommand("verify", "recompute identities for a solution file");
  std::string in_path, verify_spec;
  verify->add_option("solution", in_path, "solution header (.json)")->required();
  verify->add_option("--potential", verify_spec, "override the stored potential");
  verify->add_option("--out", out_path, "report path (.json)");

  auto* oracle = app.add_subcommand("oracle", "emit a closed-form solution");
  std::string oracle_kind = "bubble";
  double k_fam = 1.0, lambda = 1.0, alpha_cut = std::exp(-1.0), oracle_rmax = 10.0;
  std::size_t oracle_nodes = 40000;
  oracle->add_option("kind", oracle_kind)->check(CLI::IsMember({"bubble", "sharp"}));
  oracle->add_option("--k", k_fam, "bubble family index")->check(CLI::PositiveNumber);
  oracle->add_option("--lambda", lambda, "bubble scale")->check(CLI::PositiveNumber);
  oracle->add_option("--alpha", alpha_cut, "sharp example cut-off in (0, 1)")->check(CLI::Range(1e-12, 1.0 - 1e-12));
  oracle->add_option("--r-max", oracle_rmax)->check(CLI::PositiveNumber);
  oracle->add_option("--nodes", oracle_nodes)->check(CLI::Range(64ul, 1ul << 24));
  oracle->add_option("--out", out_path);

  auto* appc = app.add_subcommand("app", "physics presets");
  std::string preset = "onsager";
  double gamma = 1.0, alpha_exp = 2.0, beta_stat = -4.0 * M_PI, l_exp = -1.0, b_field = 1.0, b2 = 4.0;
  int n_int = 1;
  std::string temps;
  std::uint64_t seed = 1;
  appc->add_option("preset", preset)
      ->check(CLI::IsMember({"onsager", "onsager-scan", "sphere", "css", "css-scaling", "css-sweep"}));
  appc->add_option("--n", n)->check(CLI::NonNegativeNumber);
  appc->add_option("--gamma", gamma);
  appc->add_option("--alpha-exp", alpha_exp)->check(CLI::PositiveNumber);
  appc->add_option("--beta-stat", beta_stat);
  appc->add_option("--beta-stat-list", temps, "comma-separated inverse temperatures");
  appc->add_option("--l", l_exp);
  appc->add_option("--beta", beta);
  appc->add_option("--n-int", n_int)->check(CLI::NonNegativeNumber);
  appc->add_option("--b", b_field, "field strength")->check(CLI::PositiveNumber);
  appc->add_option("--b2", b2, "second field strength for css-scaling")->check(CLI::PositiveNumber);
  appc->add_option("--count", count)->check(CLI::Range(1, 100000));
  appc->add_option("--seed", seed, "seed for css-sweep");
  AppControls ac;
  appc->add_option("--concentration-psi0", ac.concentration_psi0, "psi(0) threshold for the concentration flag");
  appc->add_option("--concentration-mass", ac.concentration_mass, "inner mass threshold")->check(CLI::Range(0.0, 1.0));
  appc->add_option("--inner-radius", ac.inner_radius)->check(CLI::PositiveNumber);
  appc->add_option("--out", out_path);
  tol.attach(appc);

  auto* plot = app.add_subcommand("plot", "CSV columns to an SVG line chart");
  std::string csv_path;
  std::vector<std::string> columns{"psi"};
  PlotOptions popt;
  bool linear_x = false;
  plot->add_option("csv", csv_path)->required();
  plot->add_option("--columns", columns)->delimiter(',');
  plot->add_option("--x", popt.x_column);
  plot->add_flag("--linear-x", linear_x);
  plot->add_option("--title", popt.title);
  plot->add_option("--out", out_path)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (simd == "scalar") kernels::set_isa(kernels::Isa::Scalar);
    if (simd == "avx2") kernels::set_isa(kernels::Isa::Avx2);

    if (!save_config.empty()) {
      RunConfig cfg;
      CLI::App* sub = app.get_subcommands().front();
      cfg.command = sub->get_name();
      for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_name() == "--help" || opt->count() == 0) continue;
        std::string key = opt->get_name();
        if (key.rfind("--", 0) == 0) {
          key = key.substr(2);
        } else {
          key = "_";
        }
        const auto results = opt->results();
        std::string joined;
        for (const std::string& r : results) joined += (joined.empty() ? "" : " ") + r;
        if (opt->get_type_size() == 0) joined = "true";
        cfg.values[key] = cfg.values.count(key) ? cfg.values[key] + " " + joined : joined;
      }
      ensure_parent(save_config);
      cfg.save(save_config);
    }

    if (solve->parsed()) return do_solve(out, method, beta, n, spec, out_path, tol, radius, refine, vnodes);
    if (scan->parsed()) return do_scan(out, n, spec, s_min, s_max, count, sign, out_path, tol);
    if (find->parsed()) return do_find(out, beta, n, spec, bracket, out_path, tol);
    if (verify->parsed()) return do_verify(out, in_path, verify_spec, out_path);
    if (oracle->parsed()) {
      const Grid grid = Grid::make(oracle_rmax, oracle_nodes, Grading::Log);
      NormalizedSolution sol = oracle_kind == "bubble" ? conformal_bubble(k_fam, lambda, grid)
                                                        : sharp_regularity_example(alpha_cut, grid).solution;
      const Potential v = parse_potential_spec(sol.potential);
      const IdentityReport rep = check_identities(sol, v);
      out << sol.method << ": beta = " << g6(sol.beta) << ", n = " << g6(sol.n) << '\n';
      print_report(out, rep);
      write_solution(out, sol, rep, out_path);
      return kExitOk;
    }
    if (plot->parsed()) {
      popt.log_x = !linear_x;
      ensure_parent(out_path);
      plot_svg(csv_path, columns, out_path, popt);
      out << "wrote " << out_path << '\n';
      return kExitOk;
    }
    if (appc->parsed()) {
      ac.shoot = tol.shoot(1.0);
      if (preset == "onsager") {
        return finish_app(out, solve_app(Onsager{n, gamma, alpha_exp, beta_stat}, ac), out_path);
      }
      if (preset == "sphere") {
        return finish_app(out, solve_app(SphericalOnsager{n, l_exp, gamma, beta}, ac), out_path);
      }
      if (preset == "css") {
        return finish_app(out, solve_app(Css{n_int, beta, b_field}, ac), out_path);
      }
      if (preset == "css-scaling") {
        const double dev = css_scaling_check(n_int, beta, b_field, b2, ac);
        out << "max deviation from psi_B2(r) = psi_B1(sqrt(B2/B1) r) + (n+1) log(B2/B1): " << g6(dev) << '\n';
        out << "strong field: " << css_strong_field_regime(n_int, beta) << '\n';
        return kExitOk;
      }
      if (preset == "css-sweep") {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> pick_n(0, 4);
        std::uniform_real_distribution<double> pick_beta(-4.0, 12.0);
        std::ostringstream csv;
        csv << "n_int,beta,verdict,inequality_holds\n";
        int mismatches = 0;
        for (int i = 0; i < count; ++i) {
          const int ni = pick_n(rng);
          const double b = pick_beta(rng);
          const AppProblem p = derive_problem(Css{ni, b, 1.0});
          const bool holds = 2.0 * ni > b - 2.0;
          if (holds != (p.verdict == Verdict::Inside)) ++mismatches;
          csv << ni << ',' << g17(b) << ',' << to_string(p.verdict) << ',' << (holds ? 1 : 0) << '\n';
        }
        if (out_path.empty()) {
          out << csv.str();
        } else {
          ensure_parent(out_path);
          std::ofstream f(out_path, std::ios::binary);
          if (!f) throw Error("cannot write '" + out_path + "'");
          f << csv.str();
        }
        out << count << " randomized specs, " << mismatches << " verdict mismatches\n";
        return mismatches == 0 ? kExitOk : kExitError;
      }
      // onsager-scan
      if (temps.empty()) throw Error("onsager-scan: --beta-stat-list is required");
      const std::vector<double> list = parse_list(temps);
      const std::vector<ScanRow> rows = onsager_temperature_scan(n, gamma, alpha_exp, list, ac);
      for (const ScanRow& r : rows) {
        out << "beta_stat " << g6(r.param) << ": " << to_string(r.verdict);
        if (r.solved) out << ", psi(0) = " << g6(r.psi0) << ", inner mass " << g6(r.mass_inner);
        if (r.concentration) out << ", concentrated";
        if (!r.message.empty()) out << " (" << r.message << ")";
        out << '\n';
      }
      if (!out_path.empty()) {
        ensure_parent(out_path);
        write_scan_csv(rows, out_path);
        out << "wrote " << out_path << '\n';
      }
      return kExitOk;
    }
  } catch (const NonexistenceError& e) {
    out << "nonexistence: " << e.what() << '\n';
    return kExitNonexistence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace liouville::cli
