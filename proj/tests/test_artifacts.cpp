#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "legendrix/experiment.hpp"

using namespace legendrix;
using namespace legendrix::experiment;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path sandbox(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("legendrix_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

forward::SpectralCurve small_curve() {
  auto m = reduction::make_model("sphere_s1");
  forward::MinimizeConfig cfg;
  cfg.seed = 7;
  std::vector<double> grid;
  for (int i = 0; i < 12; ++i) grid.push_back(0.4 + 0.05 * i);
  return forward::spectral_curve(*m, [](double) { return 0.0; }, grid, cfg);
}

}  // namespace

TEST_CASE("spectral curve CSV: frozen header and columns") {
  auto curve = small_curve();
  auto csv = curve_to_csv(curve, "zero", 7);
  std::istringstream iss(csv);
  std::string l1, l2;
  std::getline(iss, l1);
  std::getline(iss, l2);
  CHECK(l1 == "# legendrix schema_version=1 kind=spectral_curve model=sphere_s1 "
              "potential=zero seed=7");
  CHECK(l2 == "mu,F,f_min,hess,n_min");
  int rows = 0;
  std::string line;
  while (std::getline(iss, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 12);
}

TEST_CASE("curve JSON round-trip preserves the inversion-relevant fields") {
  auto curve = small_curve();
  auto back = curve_from_json(curve_to_json(curve, "zero", 7));
  REQUIRE(back.points.size() == curve.points.size());
  for (std::size_t i = 0; i < back.points.size(); ++i) {
    CHECK(back.points[i].mu == curve.points[i].mu);
    CHECK(back.points[i].min.F == curve.points[i].min.F);
    CHECK(back.points[i].min.f_min == curve.points[i].min.f_min);
    CHECK(back.points[i].min.unique_min == curve.points[i].min.unique_min);
    CHECK(back.points[i].ok == curve.points[i].ok);
  }
}

TEST_CASE("schema version is enforced") {
  auto curve = small_curve();
  auto good = curve_to_json(curve, "zero", 7);
  CHECK_NOTHROW(check_schema(good, "spectral_curve"));
  CHECK_THROWS_AS(check_schema(good, "reconstruction"), std::invalid_argument);
  std::string bad = good;
  auto pos = bad.find("\"schema_version\": 1");
  REQUIRE(pos != std::string::npos);
  bad.replace(pos, std::string("\"schema_version\": 1").size(), "\"schema_version\": 999");
  CHECK_THROWS_AS(check_schema(bad, "spectral_curve"), std::invalid_argument);
  CHECK_THROWS_AS(curve_from_json(bad), std::invalid_argument);
}

TEST_CASE("atomic_write leaves only the final file") {
  auto dir = sandbox("atomic");
  atomic_write((dir / "x.json").string(), "{}\n");
  CHECK(slurp(dir / "x.json") == "{}\n");
  CHECK_FALSE(fs::exists(dir / "x.json.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("forward driver is byte-deterministic") {
  auto dir1 = sandbox("fwd1"), dir2 = sandbox("fwd2");
  ExperimentConfig cfg;
  cfg.model = "sphere_s1";
  cfg.potential.kind = "zero";
  cfg.mu_grid = {0.4, 1.2, 12};
  cfg.seed = 7;
  cfg.output_dir = dir1.string();
  auto names = run_forward(cfg);
  cfg.output_dir = dir2.string();
  run_forward(cfg);
  for (const auto& n : names) CHECK(slurp(dir1 / n) == slurp(dir2 / n));
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("potential spec factory and monotonicity") {
  PotentialSpec affine{"affine", 1.0, 0.5, {}, {}};
  CHECK(make_potential(affine)(2.0) == doctest::Approx(2.0));
  CHECK(potential_strictly_monotone(affine));
  PotentialSpec flat{"affine", 1.0, 0.0, {}, {}};
  CHECK_FALSE(potential_strictly_monotone(flat));
  PotentialSpec at{"arctan", 0, 0, {}, {}};
  CHECK(make_potential(at)(1.0) == doctest::Approx(std::atan(1.0)));
  PotentialSpec tab{"table", 0, 0, {0.0, 1.0, 2.0}, {0.0, 0.5, 2.0}};
  CHECK(potential_strictly_monotone(tab));
  CHECK(make_potential(tab)(1.0) == doctest::Approx(0.5));
  PotentialSpec zig{"table", 0, 0, {0.0, 1.0, 2.0}, {0.0, 1.0, 0.5}};
  CHECK_FALSE(potential_strictly_monotone(zig));
  PotentialSpec bad{"nope", 0, 0, {}, {}};
  CHECK_THROWS_AS(make_potential(bad), std::invalid_argument);
}

TEST_CASE("config validation catches malformed experiment settings") {
  ExperimentConfig cfg;
  cfg.mu_grid = {0.0, 1.0, 50};
  CHECK_THROWS_AS(validate_config(cfg, false), std::invalid_argument);  // lo > 0
  cfg.mu_grid = {0.4, 1.2, 4};
  CHECK_THROWS_AS(validate_config(cfg, false), std::invalid_argument);  // n >= 5
  cfg.mu_grid = {0.4, 1.2, 50};
  CHECK_NOTHROW(validate_config(cfg, false));
  cfg.potential = {"table", 0, 0, {0.0, 1.0, 2.0}, {0.0, 1.0, 0.5}};
  CHECK_NOTHROW(validate_config(cfg, false));                          // forward only
  CHECK_THROWS_AS(validate_config(cfg, true), std::invalid_argument);  // inversion
}

TEST_CASE("config file loading") {
  auto dir = sandbox("cfg");
  {
    std::ofstream out(dir / "c.json");
    out << R"({"model":"cp2_su2","seed":99,"mu_grid":{"lo":0.2,"hi":0.6,"n":20},
               "potential":{"kind":"arctan"},"tolerances":{"route_tol":2e-4}})";
  }
  auto cfg = load_config((dir / "c.json").string());
  CHECK(cfg.model == "cp2_su2");
  CHECK(cfg.seed == 99);
  CHECK(cfg.mu_grid.n == 20);
  CHECK(cfg.potential.kind == "arctan");
  CHECK(cfg.tol.route_tol == doctest::Approx(2e-4));
  CHECK_THROWS_AS(load_config((dir / "missing.json").string()), std::invalid_argument);
  {
    std::ofstream out(dir / "bad.json");
    out << "{not json";
  }
  CHECK_THROWS_AS(load_config((dir / "bad.json").string()), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("quantum driver emits the frozen CSV schemas") {
  auto dir = sandbox("quantum");
  ExperimentConfig cfg;
  cfg.model = "sphere_s1";
  cfg.potential.kind = "zero";
  cfg.output_dir = dir.string();
  cfg.k_list = {20, 40};
  auto names = run_quantum(cfg);
  REQUIRE(names.size() == 3);
  auto scan = slurp(dir / names[0]);
  CHECK(scan.find("k,hbar,lambda_min,F,gap\n") != std::string::npos);
  auto weyl = slurp(dir / names[1]);
  CHECK(weyl.find("k,E,qcount,classical,relerr\n") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("invert driver consumes forward artifacts") {
  auto dir = sandbox("invert");
  ExperimentConfig cfg;
  cfg.model = "cp2_su2";
  cfg.potential.kind = "arctan";
  cfg.mu_grid = {0.15, 0.55, 40};
  cfg.seed = 11;
  cfg.output_dir = dir.string();
  auto names = run_forward(cfg);
  auto rec_names = run_invert(cfg, (dir / names[1]).string());
  REQUIRE(rec_names.size() == 2);
  auto csv = slurp(dir / rec_names[0]);
  CHECK(csv.find("z,V_hat\n") != std::string::npos);
  check_schema(slurp(dir / rec_names[1]), "reconstruction");
  fs::remove_all(dir);
}

TEST_CASE("aggregate-only report validates schemas and writes a summary") {
  auto dir = sandbox("agg");
  ExperimentConfig cfg;
  cfg.algebra = "su2";
  cfg.output_dir = dir.string();
  run_algebra(cfg);
  CHECK(run_report_aggregate(dir.string()) == 0);
  CHECK(fs::exists(dir / "summary_aggregate.json"));
  // a stale-schema artifact is refused
  atomic_write((dir / "stale.json").string(),
               "{\"schema_version\": 999, \"kind\": \"algebra_report\"}\n");
  CHECK_THROWS_AS(run_report_aggregate(dir.string()), std::invalid_argument);
  fs::remove_all(dir);
}
