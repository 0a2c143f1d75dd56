#include "legendrix/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "legendrix/quantum_verify.hpp"

namespace legendrix {
namespace experiment {

namespace fs = std::filesystem;
using nlohmann::json;

// ------------------------------------------------------------- potentials

forward::ScalarPotential make_potential(const PotentialSpec& spec) {
  if (spec.kind == "zero") return [](double) { return 0.0; };
  if (spec.kind == "affine") {
    double a = spec.a, b = spec.b;
    return [a, b](double z) { return a + b * z; };
  }
  if (spec.kind == "arctan") return [](double z) { return std::atan(z); };
  if (spec.kind == "table") {
    if (spec.xs.size() < 2 || spec.xs.size() != spec.ys.size())
      throw std::invalid_argument("potential table: need matching xs/ys, >= 2 nodes");
    auto interp = std::make_shared<num::MonotoneCubic>(spec.xs, spec.ys);
    return [interp](double z) { return (*interp)(z); };
  }
  throw std::invalid_argument("unknown potential kind '" + spec.kind +
                              "' (zero|affine|arctan|table)");
}

bool potential_strictly_monotone(const PotentialSpec& spec) {
  if (spec.kind == "zero") return false;
  if (spec.kind == "affine") return spec.b != 0.0;
  if (spec.kind == "arctan") return true;
  if (spec.kind == "table") {
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < spec.ys.size(); ++i) {
      if (!(spec.ys[i] > spec.ys[i - 1])) inc = false;
      if (!(spec.ys[i] < spec.ys[i - 1])) dec = false;
    }
    return inc || dec;
  }
  return false;
}

std::vector<double> MuGrid::values() const {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

// ------------------------------------------------------------- config

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: parse error: " + std::string(e.what()));
  }
  ExperimentConfig cfg;
  cfg.model = j.value("model", cfg.model);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  cfg.algebra = j.value("algebra", cfg.algebra);
  cfg.forms = j.value("forms", cfg.forms);
  cfg.multistart = j.value("multistart", cfg.multistart);
  cfg.mu_quantum = j.value("mu_quantum", cfg.mu_quantum);
  cfg.energy = j.value("energy", cfg.energy);
  if (j.contains("k_list")) cfg.k_list = j["k_list"].get<std::vector<int>>();
  if (j.contains("b_diag")) cfg.b_diag = j["b_diag"].get<std::vector<double>>();
  if (j.contains("mu_grid")) {
    cfg.mu_grid.lo = j["mu_grid"].value("lo", cfg.mu_grid.lo);
    cfg.mu_grid.hi = j["mu_grid"].value("hi", cfg.mu_grid.hi);
    cfg.mu_grid.n = j["mu_grid"].value("n", cfg.mu_grid.n);
  }
  if (j.contains("potential")) {
    const auto& p = j["potential"];
    cfg.potential.kind = p.value("kind", cfg.potential.kind);
    cfg.potential.a = p.value("a", 0.0);
    cfg.potential.b = p.value("b", 0.0);
    if (p.contains("xs")) cfg.potential.xs = p["xs"].get<std::vector<double>>();
    if (p.contains("ys")) cfg.potential.ys = p["ys"].get<std::vector<double>>();
  }
  if (j.contains("tolerances")) {
    cfg.tol.route_tol = j["tolerances"].value("route_tol", cfg.tol.route_tol);
    cfg.tol.roundtrip_sup = j["tolerances"].value("roundtrip_sup", cfg.tol.roundtrip_sup);
  }
  if (j.contains("window")) {
    cfg.window_lo = j["window"].value("lo", 0.0);
    cfg.window_hi = j["window"].value("hi", 0.0);
  }
  if (j.contains("invert_window")) {
    cfg.invert_lo = j["invert_window"].value("lo", 0.0);
    cfg.invert_hi = j["invert_window"].value("hi", 0.0);
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg, bool inversion_requested) {
  if (!(cfg.mu_grid.lo > 0)) throw std::invalid_argument("config: mu_grid.lo > 0 required");
  if (!(cfg.mu_grid.hi > cfg.mu_grid.lo))
    throw std::invalid_argument("config: mu_grid.hi > mu_grid.lo required");
  if (cfg.mu_grid.n < 5) throw std::invalid_argument("config: mu_grid.n >= 5 required");
  make_potential(cfg.potential);  // validates kind/table shape
  if (inversion_requested && cfg.potential.kind == "table" &&
      !potential_strictly_monotone(cfg.potential))
    throw std::invalid_argument("config: table potential must be strictly monotone "
                                "when inversion is requested");
}

// ------------------------------------------------------------- artifacts

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    out << content;
  }
  fs::rename(tmp, p);
}

namespace {

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json curve_json_impl(const forward::SpectralCurve& curve, const std::string& potential_kind,
                     std::uint64_t seed) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "spectral_curve";
  j["model"] = curve.model;
  j["potential"] = potential_kind;
  j["seed"] = seed;
  json mu = json::array(), F = json::array(), fmin = json::array(), hess = json::array(),
       nmin = json::array(), uniq = json::array(), inu = json::array(),
       boundary = json::array(), fiber = json::array(), ok = json::array();
  for (const auto& p : curve.points) {
    mu.push_back(p.mu);
    F.push_back(p.min.F);
    fmin.push_back(p.min.f_min);
    hess.push_back(p.min.hess_min_eig);
    nmin.push_back(p.min.n_local_minima);
    uniq.push_back(p.min.unique_min);
    inu.push_back(p.min.in_U);
    boundary.push_back(p.min.boundary_escape);
    fiber.push_back(p.min.fiber_min_multiplicity);
    ok.push_back(p.ok);
  }
  j["mu"] = mu;
  j["F"] = F;
  j["f_min"] = fmin;
  j["hess"] = hess;
  j["n_min"] = nmin;
  j["unique_min"] = uniq;
  j["in_U"] = inu;
  j["boundary_escape"] = boundary;
  j["fiber_min_multiplicity"] = fiber;
  j["ok"] = ok;
  j["jump_flags"] = curve.jump_flags;
  j["f_monotone"] = curve.f_monotone;
  j["monotone_dir"] = curve.monotone_dir;
  return j;
}

}  // namespace

std::string curve_to_csv(const forward::SpectralCurve& curve, const std::string& potential_kind,
                         std::uint64_t seed) {
  std::ostringstream oss;
  oss << "# legendrix schema_version=" << kSchemaVersion
      << " kind=spectral_curve model=" << curve.model << " potential=" << potential_kind
      << " seed=" << seed << "\n";
  oss << "mu,F,f_min,hess,n_min\n";
  for (const auto& p : curve.points) {
    oss << format_double(p.mu) << "," << format_double(p.min.F) << ","
        << format_double(p.min.f_min) << "," << format_double(p.min.hess_min_eig) << ","
        << p.min.n_local_minima << "\n";
  }
  return oss.str();
}

std::string curve_to_json(const forward::SpectralCurve& curve, const std::string& potential_kind,
                          std::uint64_t seed) {
  return dump_json(curve_json_impl(curve, potential_kind, seed));
}

forward::SpectralCurve curve_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  if (j.value("schema_version", -1) != kSchemaVersion)
    throw std::invalid_argument("spectral curve: schema_version mismatch");
  if (j.value("kind", "") != "spectral_curve")
    throw std::invalid_argument("spectral curve: wrong artifact kind");
  forward::SpectralCurve curve;
  curve.model = j.value("model", "");
  auto mu = j["mu"].get<std::vector<double>>();
  auto F = j["F"].get<std::vector<double>>();
  auto fmin = j["f_min"].get<std::vector<double>>();
  auto hess = j["hess"].get<std::vector<double>>();
  auto nmin = j["n_min"].get<std::vector<int>>();
  auto uniq = j["unique_min"].get<std::vector<bool>>();
  auto inu = j["in_U"].get<std::vector<bool>>();
  auto ok = j["ok"].get<std::vector<bool>>();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    forward::SpectralPoint p;
    p.mu = mu[i];
    p.min.F = F[i];
    p.min.f_min = fmin[i];
    p.min.hess_min_eig = hess[i];
    p.min.n_local_minima = nmin[i];
    p.min.unique_min = uniq[i];
    p.min.in_U = inu[i];
    p.ok = ok[i];
    curve.points.push_back(p);
  }
  curve.f_monotone = j.value("f_monotone", false);
  curve.monotone_dir = j.value("monotone_dir", 0);
  return curve;
}

std::string reconstruction_to_csv(const inverse::ReconstructionResult& rec,
                                  const std::string& model) {
  std::ostringstream oss;
  oss << "# legendrix schema_version=" << kSchemaVersion
      << " kind=reconstruction model=" << model << "\n";
  oss << "z,V_hat\n";
  for (std::size_t i = 0; i < rec.z_grid.size(); ++i)
    oss << format_double(rec.z_grid[i]) << "," << format_double(rec.v_hat[i]) << "\n";
  return oss.str();
}

std::string reconstruction_to_json(const inverse::ReconstructionResult& rec,
                                   const std::string& model) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "reconstruction";
  j["model"] = model;
  j["z"] = rec.z_grid;
  j["V_hat"] = rec.v_hat;
  j["mu_of_z"] = rec.mu_of_z;
  j["window"] = {rec.window.first, rec.window.second};
  j["valid"] = rec.valid;
  j["residual_stationarity"] = rec.residual_stationarity;
  j["residual_momentum"] = rec.residual_momentum;
  j["route_disagreement"] = rec.route_disagreement;
  json br;
  br["injective"] = rec.branch_report.injective;
  br["direction"] = rec.branch_report.direction;
  br["chosen"] = rec.branch_report.chosen;
  json windows = json::array();
  for (const auto& w : rec.branch_report.windows)
    windows.push_back({{"z_lo", w.z_lo},
                       {"z_hi", w.z_hi},
                       {"direction", w.direction},
                       {"covers_targets", w.covers_targets}});
  br["windows"] = windows;
  j["branch_report"] = br;
  if (rec.comparison_sup_error) j["comparison_sup_error"] = *rec.comparison_sup_error;
  return dump_json(j);
}

void check_schema(const std::string& json_text, const std::string& expected_kind) {
  json j = json::parse(json_text);
  if (j.value("schema_version", -1) != kSchemaVersion)
    throw std::invalid_argument("artifact schema_version mismatch (expected " +
                                std::to_string(kSchemaVersion) + ")");
  if (!expected_kind.empty() && j.value("kind", "") != expected_kind)
    throw std::invalid_argument("artifact kind mismatch: expected " + expected_kind);
}

// ------------------------------------------------------------- drivers

namespace {

lie::LieAlgebraModel algebra_by_name(const std::string& name) {
  if (name == "su2") return lie::build_algebra(lie::AlgebraName::su2);
  if (name == "su3") return lie::build_algebra(lie::AlgebraName::su3);
  throw std::invalid_argument("algebra must be su2 or su3");
}

std::vector<lie::WeylChamberPoint> default_orbits(const lie::LieAlgebraModel& alg) {
  std::vector<lie::WeylChamberPoint> mus;
  if (alg.name == lie::AlgebraName::su2) {
    for (double r : {0.5, 1.0, 2.0}) mus.push_back(lie::make_chamber_point(alg, r));
  } else {
    Vec a(2), b(2);
    a << 1.0, 1.0;
    b << 0.7, 1.9;
    mus.push_back(lie::make_chamber_point(alg, a));
    mus.push_back(lie::make_chamber_point(alg, b));
  }
  return mus;
}

json morse_report_json(const lie::LieAlgebraModel& alg, const morse::QuadraticForm& B,
                       const lie::WeylChamberPoint& mu, const morse::MorseReport& rep) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "morse_report";
  j["algebra"] = lie::to_string(alg.name);
  j["mu"] = std::vector<double>(mu.mu.data(), mu.mu.data() + mu.mu.size());
  j["form_hash"] = num::hash_matrix(B.matrix());
  j["is_morse"] = rep.is_morse;
  j["distinct_values"] = rep.distinct_values;
  j["saturated"] = rep.critical.saturated;
  j["fraction_morse"] = rep.is_morse ? 1.0 : 0.0;
  json records = json::array();
  for (const auto& r : rep.critical.records) {
    json rj;
    rj["point"] = std::vector<double>(r.point.data(), r.point.data() + r.point.size());
    rj["value"] = r.value;
    rj["morse_index"] = r.morse_index;
    rj["min_abs_hessian_eig"] = r.min_abs_hessian_eig;
    rj["nondegenerate"] = r.nondegenerate;
    rj["converged"] = r.converged;
    records.push_back(rj);
  }
  j["records"] = records;
  return j;
}

json genericity_json(const lie::LieAlgebraModel& alg, const morse::GenericityReport& rep,
                     std::uint64_t seed) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "genericity_report";
  j["algebra"] = lie::to_string(alg.name);
  j["n_forms"] = rep.n_forms;
  j["n_orbits"] = rep.n_orbits;
  j["seed"] = seed;
  j["fraction_morse"] = rep.fraction_morse;
  j["controls_flagged"] = rep.controls_flagged;
  j["all_saturated"] = rep.all_saturated;
  json fails = json::array();
  for (const auto& f : rep.failures) {
    json fj;
    fj["form_index"] = f.form_index;
    fj["label"] = f.label;
    fj["mu"] = std::vector<double>(f.mu.data(), f.mu.data() + f.mu.size());
    fj["is_morse"] = f.is_morse;
    fj["distinct_values"] = f.distinct_values;
    fails.push_back(fj);
  }
  j["failures"] = fails;
  return j;
}

forward::MinimizeConfig minimize_config(const ExperimentConfig& cfg) {
  forward::MinimizeConfig mc;
  mc.multistart = cfg.multistart;
  mc.seed = cfg.seed;
  mc.window_lo = cfg.window_lo;
  mc.window_hi = cfg.window_hi;
  return mc;
}

inverse::InvertOptions invert_options(const ExperimentConfig& cfg) {
  inverse::InvertOptions opts;
  opts.route_tol = cfg.tol.route_tol;
  if (cfg.invert_lo < cfg.invert_hi)
    opts.window_hint = std::make_pair(cfg.invert_lo, cfg.invert_hi);
  return opts;
}

double default_roundtrip_tol(const std::string& model) {
  return model == "cp2_su2" ? 5e-3 : 1e-3;
}

}  // namespace

std::vector<std::string> run_algebra(const ExperimentConfig& cfg) {
  auto alg = algebra_by_name(cfg.algebra);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "algebra_report";
  j["name"] = lie::to_string(alg.name);
  j["dim"] = alg.dim;
  j["cartan_indices"] = alg.cartan_indices;
  j["chamber"] = alg.chamber.description;
  j["jacobi_residual"] = lie::jacobi_residual(alg);
  std::vector<std::vector<double>> K(alg.dim, std::vector<double>(alg.dim));
  for (int i = 0; i < alg.dim; ++i)
    for (int c = 0; c < alg.dim; ++c) K[i][c] = alg.killing(i, c);
  j["killing"] = K;
  Eigen::SelfAdjointEigenSolver<Mat> es(alg.killing, Eigen::EigenvaluesOnly);
  j["killing_max_eigenvalue"] = es.eigenvalues().maxCoeff();
  std::string name = "algebra_" + cfg.algebra + ".json";
  atomic_write(cfg.output_dir + "/" + name, dump_json(j));
  return {name};
}

std::vector<std::string> run_morse(const ExperimentConfig& cfg) {
  auto alg = algebra_by_name(cfg.algebra);
  std::vector<double> diag = cfg.b_diag;
  if (diag.empty())
    for (int i = 0; i < alg.dim; ++i) diag.push_back(i + 1.0);
  if (static_cast<int>(diag.size()) != alg.dim)
    throw std::invalid_argument("morse: b_diag must have dim entries");
  Mat B = Mat::Zero(alg.dim, alg.dim);
  for (int i = 0; i < alg.dim; ++i) B(i, i) = diag[i];
  morse::QuadraticForm form(B);
  auto mu = (alg.cartan_dim == 1) ? lie::make_chamber_point(alg, cfg.mu_grid.lo)
                                  : default_orbits(alg).front();
  morse::MultistartConfig mc;
  mc.seed = cfg.seed;
  auto rep = morse::is_morse(alg, form, mu, mc);
  std::string name = "morse_" + cfg.algebra + ".json";
  atomic_write(cfg.output_dir + "/" + name, dump_json(morse_report_json(alg, form, mu, rep)));
  return {name};
}

std::vector<std::string> run_genericity(const ExperimentConfig& cfg) {
  auto alg = algebra_by_name(cfg.algebra);
  auto orbits = default_orbits(alg);
  auto rep = morse::genericity_sample(alg, cfg.forms, orbits, cfg.seed);
  std::string name = "genericity_" + cfg.algebra + ".json";
  atomic_write(cfg.output_dir + "/" + name, dump_json(genericity_json(alg, rep, cfg.seed)));
  return {name};
}

std::vector<std::string> run_forward(const ExperimentConfig& cfg) {
  validate_config(cfg, false);
  auto model = reduction::make_model(cfg.model);
  auto v = make_potential(cfg.potential);
  auto curve = forward::spectral_curve(*model, v, cfg.mu_grid.values(), minimize_config(cfg));
  std::string base = "forward_" + cfg.model + "_" + cfg.potential.kind;
  atomic_write(cfg.output_dir + "/" + base + ".csv", curve_to_csv(curve, cfg.potential.kind, cfg.seed));
  atomic_write(cfg.output_dir + "/" + base + ".json", curve_to_json(curve, cfg.potential.kind, cfg.seed));
  return {base + ".csv", base + ".json"};
}

std::vector<std::string> run_invert(const ExperimentConfig& cfg, const std::string& curve_json_path) {
  std::ifstream in(curve_json_path);
  if (!in) throw std::invalid_argument("invert: cannot open " + curve_json_path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto curve = curve_from_json(ss.str());
  auto model = reduction::make_model(curve.model);
  auto geom = inverse::reduced_geometry(*model);
  inverse::InvertOptions opts = invert_options(cfg);
  if (!opts.window_hint && curve.model == "sphere_s1")
    opts.window_hint = std::make_pair(model->z_window().first, M_PI / 2);
  auto rec = inverse::invert_1d(curve, geom, opts);
  std::string base = "reconstruction_" + curve.model;
  atomic_write(cfg.output_dir + "/" + base + ".csv", reconstruction_to_csv(rec, curve.model));
  atomic_write(cfg.output_dir + "/" + base + ".json", reconstruction_to_json(rec, curve.model));
  return {base + ".csv", base + ".json"};
}

RoundtripOutcome run_roundtrip(const ExperimentConfig& cfg) {
  validate_config(cfg, true);
  auto model = reduction::make_model(cfg.model);
  auto v = make_potential(cfg.potential);
  auto curve = forward::spectral_curve(*model, v, cfg.mu_grid.values(), minimize_config(cfg));
  auto geom = inverse::reduced_geometry(*model);
  inverse::InvertOptions opts = invert_options(cfg);
  if (!opts.window_hint && cfg.model == "sphere_s1") {
    // the sphere profile is symmetric about the equator; default to the
    // branch the increasing potentials of this driver select
    opts.window_hint = std::make_pair(model->z_window().first, M_PI / 2);
  }
  forward::ScalarPotential truth = v;
  auto rec = inverse::invert_1d(curve, geom, opts, &truth);

  RoundtripOutcome out;
  out.sup_error = rec.comparison_sup_error.value_or(std::numeric_limits<double>::infinity());
  out.residual_stationarity = rec.residual_stationarity;
  out.residual_momentum = rec.residual_momentum;
  double tol = cfg.tol.roundtrip_sup > 0 ? cfg.tol.roundtrip_sup : default_roundtrip_tol(cfg.model);
  out.pass = out.sup_error <= tol;

  std::string base = "roundtrip_" + cfg.model + "_" + cfg.potential.kind;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "roundtrip_report";
  j["model"] = cfg.model;
  j["potential"] = cfg.potential.kind;
  j["seed"] = cfg.seed;
  j["sup_error"] = out.sup_error;
  j["tolerance"] = tol;
  j["pass"] = out.pass;
  j["residual_stationarity"] = out.residual_stationarity;
  j["residual_momentum"] = out.residual_momentum;
  j["window"] = {rec.window.first, rec.window.second};
  atomic_write(cfg.output_dir + "/" + base + ".json", dump_json(j));
  atomic_write(cfg.output_dir + "/reconstruction_" + cfg.model + ".csv",
               reconstruction_to_csv(rec, cfg.model));
  atomic_write(cfg.output_dir + "/reconstruction_" + cfg.model + ".json",
               reconstruction_to_json(rec, cfg.model));
  out.artifacts = {base + ".json", "reconstruction_" + cfg.model + ".csv",
                   "reconstruction_" + cfg.model + ".json"};
  return out;
}

std::vector<std::string> run_quantum(const ExperimentConfig& cfg) {
  if (cfg.model != "sphere_s1")
    throw std::invalid_argument("quantum: weight-space solver is the abelian sphere model");
  auto v = make_potential(cfg.potential);
  double mu = cfg.mu_quantum;

  // reference F from a dense scan of the effective potential
  auto model = reduction::make_model(cfg.model);
  auto h = forward::effective_potential_z(*model, v, mu);
  auto [zlo, zhi] = model->z_window();
  double f_ref = std::numeric_limits<double>::infinity();
  const int N = 200001;
  for (int i = 0; i < N; ++i) f_ref = std::min(f_ref, h(zlo + (zhi - zlo) * i / (N - 1.0)));

  auto scan = quantum::ground_energy_scan(v, mu, cfg.k_list, f_ref);
  std::ostringstream csv;
  csv << "# legendrix schema_version=" << kSchemaVersion << " kind=quantum_scan model="
      << cfg.model << " potential=" << cfg.potential.kind << "\n";
  csv << "k,hbar,lambda_min,F,gap\n";
  for (const auto& r : scan.rows)
    csv << r.k << "," << format_double(r.hbar) << "," << format_double(r.lambda_min) << ","
        << format_double(f_ref) << "," << format_double(r.gap) << "\n";

  std::ostringstream wcsv;
  wcsv << "# legendrix schema_version=" << kSchemaVersion << " kind=weyl_count model="
       << cfg.model << " potential=" << cfg.potential.kind << "\n";
  wcsv << "k,E,qcount,classical,relerr\n";
  json wj;
  json rows = json::array();
  for (int k : cfg.k_list) {
    auto wc = quantum::weyl_count(v, mu, 1.0 / k, cfg.energy);
    wcsv << k << "," << format_double(cfg.energy) << "," << wc.quantum << ","
         << format_double(wc.classical) << "," << format_double(wc.rel_error) << "\n";
    rows.push_back({{"k", k},
                    {"qcount", wc.quantum},
                    {"classical", wc.classical},
                    {"relerr", wc.rel_error}});
  }
  json sj;
  sj["schema_version"] = kSchemaVersion;
  sj["kind"] = "quantum_report";
  sj["model"] = cfg.model;
  sj["potential"] = cfg.potential.kind;
  sj["mu"] = mu;
  sj["F_ref"] = f_ref;
  sj["loglog_slope"] = scan.loglog_slope;
  sj["energy"] = cfg.energy;
  sj["weyl"] = rows;

  std::string s1 = "quantum_scan_" + cfg.potential.kind + ".csv";
  std::string s2 = "weyl_" + cfg.potential.kind + ".csv";
  std::string s3 = "quantum_" + cfg.potential.kind + ".json";
  atomic_write(cfg.output_dir + "/" + s1, csv.str());
  atomic_write(cfg.output_dir + "/" + s2, wcsv.str());
  atomic_write(cfg.output_dir + "/" + s3, dump_json(sj));
  return {s1, s2, s3};
}

}  // namespace experiment
}  // namespace legendrix
