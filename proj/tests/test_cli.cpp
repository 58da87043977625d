#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "liouville/cli.hpp"
#include "liouville/error.hpp"
#include "liouville/plot_svg.hpp"
#include "liouville/run_config.hpp"

using namespace liouville;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path p = fs::temp_directory_path() / "liouville_cli_test";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("solve then verify") {
  const fs::path dir = scratch();
  const std::string json = (dir / "g.json").string();
  const Result r = run({"solve", "--method", "shooting", "--beta", "1", "--n", "0", "--potential",
                        "gauss:gamma=1,alpha=2", "--out", json});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(fs::exists(dir / "g.json"));
  REQUIRE(fs::exists(dir / "g.csv"));
  std::ifstream csv(dir / "g.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "r,psi,r_dpsi,mass");

  const Result v = run({"verify", json});
  REQUIRE(v.code == cli::kExitOk);
  const nlohmann::json rep = nlohmann::json::parse(v.out);
  for (const char* key : {"mass_residual", "flux_residual", "slope_at_infinity", "pokhozhaev_residual", "log_lip_ok",
                          "grad_bound_ok", "P_min"}) {
    CHECK(rep.contains(key));
  }
  CHECK(rep["mass_residual"].get<double>() < 1e-6);
  CHECK(rep["flux_residual"].get<double>() < 2e-6);
  CHECK(rep["log_lip_ok"].get<bool>());

  const nlohmann::json head = nlohmann::json::parse(slurp(dir / "g.json"));
  CHECK(head["beta"].get<double>() == 1.0);
  CHECK(head["potential"].get<std::string>() == "gauss:npow=0,gamma=1,alpha=2");
  CHECK(head["csv"].get<std::string>() == "g.csv");
  CHECK(head.contains("tolerances"));
  CHECK(head.contains("residuals"));
}

TEST_CASE("nonexistence exit status") {
  const Result r = run({"find", "--beta", "2.5", "--n", "0", "--potential", "gauss:gamma=1,alpha=2"});
  CHECK(r.code == cli::kExitNonexistence);
  CHECK(r.out.find("n > beta - 2") != std::string::npos);
  const Result v = run({"solve", "--method", "variational", "--beta", "2.5", "--potential", "gauss:gamma=1,alpha=2"});
  CHECK(v.code == cli::kExitNonexistence);
  CHECK(run({"app", "css", "--n-int", "0", "--beta", "3"}).code == cli::kExitNonexistence);
  CHECK(run({"app", "css", "--n-int", "1", "--beta", "2"}).code == cli::kExitOk);
}

TEST_CASE("errors exit with status 1") {
  CHECK(run({"solve", "--beta", "1", "--bogus"}).code == cli::kExitError);
  CHECK(run({"frobnicate"}).code == cli::kExitError);
  CHECK(run({}).code == cli::kExitError);
  const Result bad = run({"solve", "--beta", "1", "--potential", "gauss:gamma"});
  CHECK(bad.code == cli::kExitError);
  CHECK(bad.err.find("malformed potential spec") != std::string::npos);
  CHECK(run({"verify", "/nonexistent/file.json"}).code == cli::kExitError);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("console output uses 6 significant digits") {
  const Result r = run({"find", "--beta", "1", "--potential", "gauss:gamma=1,alpha=2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("beta(s*) = 1,") != std::string::npos);
  CHECK(r.out.find("root s* = 2.35") != std::string::npos);
}

TEST_CASE("scan output is deterministic and config round-trips") {
  const fs::path dir = scratch();
  const std::string cfg = (dir / "scan.cfg").string();
  const std::string a = (dir / "a.csv").string();
  const std::string b = (dir / "b.csv").string();
  REQUIRE(run({"--save-config", cfg, "scan", "--potential", "gauss:gamma=1,alpha=2", "--s-min", "-2", "--s-max",
               "6", "--count", "9", "--out", a})
              .code == 0);
  const RunConfig loaded = RunConfig::load(cfg);
  CHECK(loaded.command == "scan");
  CHECK(loaded.values.at("count") == "9");
  CHECK(RunConfig::parse(loaded.dump()).dump() == loaded.dump());

  RunConfig moved = loaded;
  moved.values["out"] = b;
  moved.save(cfg);
  REQUIRE(run({"--config", cfg}).code == 0);
  CHECK(slurp(a) == slurp(b));
  const std::string csv = slurp(a);
  CHECK(csv.rfind("s,ok,beta,beta_prime,beta_prime_fd\n", 0) == 0);
}

TEST_CASE("config parsing") {
  const RunConfig c = RunConfig::parse("# comment\ncommand = solve\nbeta=1.5\n\nrefine=true\nquiet=false\n");
  CHECK(c.command == "solve");
  const std::vector<std::string> args = c.to_args();
  CHECK(args == std::vector<std::string>{"solve", "--beta", "1.5", "--refine"});
  CHECK_THROWS_AS(RunConfig::parse("beta=1\n"), Error);
  CHECK_THROWS_AS(RunConfig::parse("command=solve\nbeta\n"), Error);
  CHECK_THROWS_AS(RunConfig::parse("command=solve\nbeta=1\nbeta=2\n"), Error);
}

TEST_CASE("oracle emission") {
  const fs::path dir = scratch();
  const std::string out = (dir / "bubble.json").string();
  const Result r = run({"oracle", "bubble", "--k", "2", "--lambda", "1.5", "--r-max", "100", "--out", out});
  REQUIRE(r.code == 0);
  const Result v = run({"verify", out});
  REQUIRE(v.code == 0);
  CHECK(nlohmann::json::parse(v.out)["pokhozhaev_residual"].get<double>() < 1e-6);
  CHECK(run({"oracle", "sharp", "--alpha", "0.3"}).code == 0);
}

TEST_CASE("plot") {
  const fs::path dir = scratch();
  const fs::path csv = dir / "p.csv";
  std::ofstream(csv) << "r,psi,mass\n0.1,1,0\n1,0.5,0.5\n10,-2,1\n";
  const std::string svg = (dir / "p.svg").string();
  plot_svg(csv.string(), {"psi"}, svg);
  const std::string text = slurp(svg);
  std::size_t lines = 0;
  for (std::size_t pos = text.find("<polyline"); pos != std::string::npos; pos = text.find("<polyline", pos + 1)) ++lines;
  CHECK(lines == 1);
  CHECK(text.rfind("<svg", 0) == 0);

  const std::string svg2 = (dir / "p2.svg").string();
  REQUIRE(run({"plot", csv.string(), "--columns", "psi", "--out", svg2}).code == 0);
  CHECK(slurp(svg2) == text);

  try {
    plot_svg(csv.string(), {"nope"}, svg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("missing column 'nope'") != std::string::npos);
  }
  const fs::path empty = dir / "empty.csv";
  std::ofstream(empty) << "r,psi\n";
  try {
    plot_svg(empty.string(), {"psi"}, svg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("no rows") != std::string::npos);
  }
  CHECK(run({"plot", csv.string(), "--columns", "mass,nope", "--out", svg2}).code == cli::kExitError);
}

TEST_CASE("app presets") {
  const fs::path dir = scratch();
  const std::string out = (dir / "onsager.csv").string();
  const Result r = run({"app", "onsager-scan", "--n", "0", "--beta-stat-list=-4,-8,-40", "--out", out});
  REQUIRE(r.code == 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "param,verdict,psi0,mass_inner,beta_eq");
  const Result s = run({"app", "css-scaling", "--n-int", "1", "--beta", "2", "--b", "1", "--b2", "1e4"});
  REQUIRE(s.code == 0);
  CHECK(s.out.find("(ii) If n+1=beta") != std::string::npos);
  const Result sweep = run({"app", "css-sweep", "--count", "20", "--seed", "5"});
  CHECK(sweep.code == 0);
  CHECK(sweep.out.find("0 verdict mismatches") != std::string::npos);
  CHECK(run({"app", "sphere", "--n", "0", "--l", "-1", "--gamma", "0", "--beta", "1"}).code == 0);
}
