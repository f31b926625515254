#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "tsgag/scenario.hpp"

using namespace tsgag;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("tsgag_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

fs::path write_file(const fs::path& dir, const std::string& name,
                    const std::string& body) {
  fs::path p = dir / name;
  std::ofstream out(p);
  out << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kLinearScenario = R"({
  "id": "linear-unit",
  "timescale": { "intervals": [[0, 1]] },
  "functions": { "u": { "kind": "linear", "slope": 1, "intercept": 0 } },
  "params": { "alpha": 0.5, "p": 2 },
  "commands": ["seminorm", "measure"]
})";

}  // namespace

TEST_CASE("minimal scenario parses") {
  TempDir tmp;
  auto p = write_file(tmp.path, "linear.json", kLinearScenario);
  Scenario sc = parse_scenario(p.string());
  CHECK(sc.id == "linear-unit");
  CHECK(sc.timescale.component_count() == 1);
  CHECK(sc.alpha == 0.5);
  CHECK(sc.functions.count("u") == 1);
  CHECK(sc.commands.size() == 2);
}

TEST_CASE("quadrature overrides and extra params round-trip") {
  TempDir tmp;
  auto p = write_file(tmp.path, "full.json", R"({
    "id": "full",
    "timescale": { "intervals": [[0, 1]], "atoms": [[2, 0.5]] },
    "functions": { "u": { "kind": "constant", "value": 1 } },
    "params": { "alpha": 0.3, "p": 1.5, "beta": 0.1, "theta": 0.25, "q": 3,
                "x0": 0.5, "weights": [2, 3], "cells_per_interval": [8],
                "samples": 17, "seed": 42 },
    "quad": { "rel_tol": 1e-6, "abs_tol": 1e-10, "panel_order": 6,
              "max_refinement_depth": 20, "diagonal_cutoff_eta": 0.001,
              "reproducible": false }
  })");
  Scenario sc = parse_scenario(p.string());
  CHECK(sc.quad.rel_tol == 1e-6);
  CHECK(sc.quad.abs_tol == 1e-10);
  CHECK(sc.quad.panel_order == 6);
  CHECK(sc.quad.max_refinement_depth == 20);
  CHECK(sc.quad.diagonal_cutoff_eta == 0.001);
  CHECK(!sc.quad.reproducible);
  REQUIRE(sc.weights.has_value());
  CHECK(sc.weights->size() == 2);
  CHECK(sc.beta == 0.1);
  CHECK(sc.theta == 0.25);
  CHECK(sc.q == 3.0);
  CHECK(sc.x0 == 0.5);
  CHECK(sc.samples == 17);
  CHECK(sc.seed == 42);
  CHECK(sc.cells_per_interval == std::vector<int>{8});
}

TEST_CASE("domain and parse errors") {
  TempDir tmp;
  auto bad_alpha = write_file(tmp.path, "bad_alpha.json", R"({
    "timescale": { "intervals": [[0,1]] },
    "params": { "alpha": 1.5 }
  })");
  try {
    parse_scenario(bad_alpha.string());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainError);
    CHECK(std::string(e.what()).find("alpha") != std::string::npos);
  }

  auto no_ts = write_file(tmp.path, "no_ts.json", R"({ "params": {} })");
  CHECK_THROWS_AS(parse_scenario(no_ts.string()), Error);

  auto not_json = write_file(tmp.path, "broken.json", "{ not json");
  try {
    parse_scenario(not_json.string());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }

  auto bad_cmd = write_file(tmp.path, "bad_cmd.json", R"({
    "timescale": { "intervals": [[0,1]] },
    "commands": ["frobnicate"]
  })");
  CHECK_THROWS_AS(parse_scenario(bad_cmd.string()), Error);

  CHECK_THROWS_AS(parse_scenario((tmp.path / "missing.json").string()), Error);
}

TEST_CASE("unknown function reference is a parse error at dispatch") {
  TempDir tmp;
  auto p = write_file(tmp.path, "nofunc.json", R"({
    "timescale": { "intervals": [[0,1]] },
    "params": { "function": "w" }
  })");
  Scenario sc = parse_scenario(p.string());
  CliOptions opts;
  opts.out_dir = (tmp.path / "out").string();
  try {
    run_command("seminorm", sc, opts);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}

TEST_CASE("seminorm command: CSV artifact and deterministic bytes") {
  TempDir tmp;
  auto p = write_file(tmp.path, "linear.json", kLinearScenario);
  Scenario sc = parse_scenario(p.string());

  CliOptions opts1;
  opts1.out_dir = (tmp.path / "run1").string();
  CommandOutcome o1 = run_command("seminorm", sc, opts1);
  CHECK(o1.exit_code == 0);
  REQUIRE(!o1.artifacts.empty());
  const std::string csv1 = slurp(o1.artifacts.front());
  CHECK(csv1.find("scenario_id") != std::string::npos);
  CHECK(csv1.find("linear-unit") != std::string::npos);

  CliOptions opts2;
  opts2.out_dir = (tmp.path / "run2").string();
  CommandOutcome o2 = run_command("seminorm", sc, opts2);
  CHECK(slurp(o2.artifacts.front()) == csv1);
}

TEST_CASE("divergent scenario exits with the mathematical flag") {
  TempDir tmp;
  auto p = write_file(tmp.path, "diverge.json", R"({
    "id": "indicator-supercritical",
    "timescale": { "intervals": [[0, 1]] },
    "functions": { "u": { "kind": "indicator", "lo": 0, "hi": 0.5 } },
    "params": { "alpha": 0.6, "p": 2 }
  })");
  Scenario sc = parse_scenario(p.string());
  CliOptions opts;
  opts.out_dir = (tmp.path / "out").string();
  CommandOutcome o = run_command("seminorm", sc, opts);
  CHECK(o.exit_code == 2);
  const std::string csv = slurp(o.artifacts.front());
  CHECK(csv.find("inf") != std::string::npos);
}

TEST_CASE("report over a scenario directory") {
  TempDir tmp;
  fs::path dir = tmp.path / "scenarios";
  fs::create_directories(dir);
  write_file(dir, "a_linear.json", kLinearScenario);
  write_file(dir, "b_atoms.json", R"({
    "id": "two-atoms",
    "timescale": { "atoms": [[0, 1], [2, 1]] },
    "functions": { "u": [ {"component": 0, "kind": "constant", "value": 0},
                          {"component": 1, "kind": "constant", "value": 1} ] },
    "params": { "alpha": 0.5, "p": 2 },
    "commands": ["seminorm", "poincare", "discrete-poincare"]
  })");

  CliOptions opts;
  opts.out_dir = (tmp.path / "report_out").string();
  CommandOutcome o = run_report(dir.string(), opts);
  CHECK(o.exit_code == 0);
  CHECK(fs::exists(fs::path(opts.out_dir) / "seminorm.csv"));
  CHECK(fs::exists(fs::path(opts.out_dir) / "measure.csv"));
  CHECK(fs::exists(fs::path(opts.out_dir) / "poincare.csv"));
  CHECK(fs::exists(fs::path(opts.out_dir) / "discrete-poincare.csv"));
  CHECK(fs::exists(fs::path(opts.out_dir) / "index.csv"));

  const std::string sem = slurp(fs::path(opts.out_dir) / "seminorm.csv");
  CHECK(sem.find("linear-unit") != std::string::npos);
  CHECK(sem.find("two-atoms") != std::string::npos);
}

TEST_CASE("svg artifacts are emitted on request") {
  TempDir tmp;
  auto p = write_file(tmp.path, "linear.json", kLinearScenario);
  Scenario sc = parse_scenario(p.string());
  CliOptions opts;
  opts.out_dir = (tmp.path / "svg_out").string();
  opts.svg = true;
  CommandOutcome o = run_command("seminorm", sc, opts);
  bool has_svg = false;
  for (const auto& a : o.artifacts) {
    if (a.size() > 4 && a.substr(a.size() - 4) == ".svg") {
      has_svg = true;
      const std::string body = slurp(a);
      CHECK(body.find("<svg") != std::string::npos);
      CHECK(body.find("version=\"1.1\"") != std::string::npos);
    }
  }
  CHECK(has_svg);
}
