// legendrix: reproducible experiment driver for the equivariant spectral
// toolkit. Subcommands: algebra, morse, genericity, forward, invert,
// roundtrip, quantum, report. Exit codes: 0 success, 2 invalid config,
// 3 numerical failure (diagnostic file written).

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "legendrix/experiment.hpp"

using namespace legendrix;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

experiment::ExperimentConfig resolve_config(const CommonOpts& c) {
  experiment::ExperimentConfig cfg;
  if (!c.config_path.empty()) cfg = experiment::load_config(c.config_path);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.seed_set) cfg.seed = c.seed;
  return cfg;
}

int write_diagnostic(const experiment::ExperimentConfig& cfg, const std::string& subcommand,
                     const std::string& what) {
  try {
    std::string body = "{\n  \"schema_version\": 1,\n  \"kind\": \"diagnostic\",\n"
                       "  \"subcommand\": \"" + subcommand + "\",\n  \"error\": \"" + what +
                       "\"\n}\n";
    experiment::atomic_write(cfg.output_dir + "/diagnostic.json", body);
  } catch (...) {
  }
  std::cerr << "numerical failure: " << what << "\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"legendrix: equivariant spectral invariants, generalized Legendre "
               "inversion and quantum validation"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOpts common;
  app.add_option("--config", common.config_path, "JSON config file");
  app.add_option("--out", common.out, "output directory (overrides config)");
  auto* seed_opt = app.add_option("--seed", common.seed, "RNG seed (overrides config)");

  std::string algebra = "su2";
  int forms = 100;
  std::string model, potential_kind, curve_path, aggregate_dir;
  double mu_lo = 0, mu_hi = 0;
  double pot_a = 1.0, pot_b = 0.5;
  int mu_n = 0;

  auto* alg_cmd = app.add_subcommand("algebra", "build a Lie algebra model and report checks");
  alg_cmd->add_option("--algebra", algebra, "su2 | su3");

  auto* morse_cmd = app.add_subcommand("morse", "critical points of a diagonal form on an orbit");
  morse_cmd->add_option("--algebra", algebra, "su2 | su3");

  auto* gen_cmd = app.add_subcommand("genericity", "random-form Morse genericity experiment");
  gen_cmd->add_option("--algebra", algebra, "su2 | su3");
  gen_cmd->add_option("--forms", forms, "number of random forms");

  auto* fwd_cmd = app.add_subcommand("forward", "spectral curve F(mu) for a model/potential");
  fwd_cmd->add_option("--model", model, "sphere_s1 | cp2_su2");
  fwd_cmd->add_option("--potential", potential_kind, "zero | affine | arctan | table");
  fwd_cmd->add_option("--mu-lo", mu_lo, "mu grid start");
  fwd_cmd->add_option("--mu-hi", mu_hi, "mu grid end");
  fwd_cmd->add_option("--mu-n", mu_n, "mu grid points");

  auto* inv_cmd = app.add_subcommand("invert", "recover V_red from a spectral curve artifact");
  inv_cmd->add_option("--curve", curve_path, "spectral curve JSON")->required();

  auto* rt_cmd = app.add_subcommand("roundtrip", "forward then invert, report sup-error");
  rt_cmd->add_option("--model", model, "sphere_s1 | cp2_su2");
  rt_cmd->add_option("--potential", potential_kind, "zero | affine | arctan | table");
  rt_cmd->add_option("--pot-a", pot_a, "affine potential offset (default 1)");
  rt_cmd->add_option("--pot-b", pot_b, "affine potential slope (default 0.5)");

  auto* q_cmd = app.add_subcommand("quantum", "weight-space eigensolver scans and Weyl counts");
  q_cmd->add_option("--potential", potential_kind, "zero | affine | arctan | table");

  auto* rep_cmd = app.add_subcommand("report", "run the full pipeline and summarize criteria");
  rep_cmd->add_option("--aggregate-only", aggregate_dir,
                      "aggregate an existing artifact directory instead of running");

  CLI11_PARSE(app, argc, argv);
  common.seed_set = seed_opt->count() > 0;

  experiment::ExperimentConfig cfg;
  std::string sub;
  try {
    cfg = resolve_config(common);
    if (!model.empty()) cfg.model = model;
    if (!potential_kind.empty()) {
      cfg.potential.kind = potential_kind;
      if (potential_kind == "affine") {
        cfg.potential.a = pot_a;
        cfg.potential.b = pot_b;
      }
    }
    if (mu_n > 0) cfg.mu_grid = {mu_lo, mu_hi, mu_n};
    else if (rt_cmd->parsed() && cfg.model == "cp2_su2")
      cfg.mu_grid = {0.15, 0.55, 200};  // interior minima need mu < 1/sqrt(2)
    if (alg_cmd->parsed() || morse_cmd->parsed() || gen_cmd->parsed()) cfg.algebra = algebra;
    cfg.forms = forms;
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 2;
  }

  try {
    if (alg_cmd->parsed()) {
      sub = "algebra";
      for (auto& a : experiment::run_algebra(cfg)) std::cout << cfg.output_dir << "/" << a << "\n";
    } else if (morse_cmd->parsed()) {
      sub = "morse";
      for (auto& a : experiment::run_morse(cfg)) std::cout << cfg.output_dir << "/" << a << "\n";
    } else if (gen_cmd->parsed()) {
      sub = "genericity";
      for (auto& a : experiment::run_genericity(cfg))
        std::cout << cfg.output_dir << "/" << a << "\n";
    } else if (fwd_cmd->parsed()) {
      sub = "forward";
      for (auto& a : experiment::run_forward(cfg)) std::cout << cfg.output_dir << "/" << a << "\n";
    } else if (inv_cmd->parsed()) {
      sub = "invert";
      for (auto& a : experiment::run_invert(cfg, curve_path))
        std::cout << cfg.output_dir << "/" << a << "\n";
    } else if (rt_cmd->parsed()) {
      sub = "roundtrip";
      auto out = experiment::run_roundtrip(cfg);
      std::cout << "sup_error " << experiment::format_double(out.sup_error)
                << (out.pass ? " PASS" : " FAIL") << "\n";
      return out.pass ? 0 : 3;
    } else if (q_cmd->parsed()) {
      sub = "quantum";
      for (auto& a : experiment::run_quantum(cfg)) std::cout << cfg.output_dir << "/" << a << "\n";
    } else if (rep_cmd->parsed()) {
      sub = "report";
      if (!aggregate_dir.empty()) return experiment::run_report_aggregate(aggregate_dir);
      return experiment::run_report(cfg);
    }
  } catch (const numerical_error& e) {
    return write_diagnostic(cfg, sub, e.what());
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    return write_diagnostic(cfg, sub, e.what());
  }
  return 0;
}
