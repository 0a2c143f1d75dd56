#ifndef LEGENDRIX_EXPERIMENT_HPP
#define LEGENDRIX_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "legendrix/forward_map.hpp"
#include "legendrix/legendre_inverse.hpp"

namespace legendrix {
namespace experiment {

/// Reproducible experiment driver: configuration, subcommand pipelines and
/// artifact emission. Artifacts are schema-versioned, contain no
/// timestamps or absolute paths, and are written atomically (temp +
/// rename); identical (config, seed) runs are byte-identical.

inline constexpr int kSchemaVersion = 1;

struct PotentialSpec {
  std::string kind = "zero";  // zero | affine | arctan | table
  double a = 0.0, b = 0.0;    // affine: a + b z
  std::vector<double> xs, ys; // table nodes (monotone cubic)
};

forward::ScalarPotential make_potential(const PotentialSpec& spec);
bool potential_strictly_monotone(const PotentialSpec& spec);

struct MuGrid {
  double lo = 0.4, hi = 1.2;
  int n = 50;
  std::vector<double> values() const;
};

struct Tolerances {
  double route_tol = 1e-4;
  double roundtrip_sup = 0.0;  // 0: model default (1e-3 sphere, 5e-3 cp2)
};

struct ExperimentConfig {
  std::string model = "sphere_s1";
  PotentialSpec potential;
  MuGrid mu_grid;
  std::uint64_t seed = 7;
  Tolerances tol;
  std::string output_dir = "out";
  // subcommand extras
  std::string algebra = "su2";
  int forms = 100;
  int multistart = 32;
  double window_lo = 0.0, window_hi = 0.0;       // forward z-window override
  double invert_lo = 0.0, invert_hi = 0.0;       // inversion branch hint
  double mu_quantum = 1.0;
  std::vector<int> k_list = {20, 40, 80, 160};
  double energy = 4.0;
  std::vector<double> b_diag;  // morse subcommand form; empty: diag(1..dim)
};

/// Throws std::invalid_argument on malformed config (CLI exit code 2).
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& cfg, bool inversion_requested);

// ------------------------------------------------------------- artifacts

void atomic_write(const std::string& path, const std::string& content);
std::string format_double(double v);  // %.17g, deterministic

std::string curve_to_csv(const forward::SpectralCurve& curve, const std::string& potential_kind,
                         std::uint64_t seed);
std::string curve_to_json(const forward::SpectralCurve& curve, const std::string& potential_kind,
                          std::uint64_t seed);
forward::SpectralCurve curve_from_json(const std::string& json_text);

std::string reconstruction_to_csv(const inverse::ReconstructionResult& rec,
                                  const std::string& model);
std::string reconstruction_to_json(const inverse::ReconstructionResult& rec,
                                   const std::string& model);

/// Validates the embedded schema_version of a JSON artifact; throws on
/// mismatch (report refuses to aggregate it).
void check_schema(const std::string& json_text, const std::string& expected_kind);

// ------------------------------------------------------------- drivers

/// Each driver writes its artifacts under cfg.output_dir and returns the
/// relative file names, in write order.
std::vector<std::string> run_algebra(const ExperimentConfig& cfg);
std::vector<std::string> run_morse(const ExperimentConfig& cfg);
std::vector<std::string> run_genericity(const ExperimentConfig& cfg);
std::vector<std::string> run_forward(const ExperimentConfig& cfg);
std::vector<std::string> run_invert(const ExperimentConfig& cfg, const std::string& curve_json_path);

struct RoundtripOutcome {
  double sup_error = 0.0;
  double residual_stationarity = 0.0;
  double residual_momentum = 0.0;
  bool pass = false;
  std::vector<std::string> artifacts;
};
RoundtripOutcome run_roundtrip(const ExperimentConfig& cfg);

std::vector<std::string> run_quantum(const ExperimentConfig& cfg);

struct CriterionVerdict {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CriteriaResults {
  std::vector<CriterionVerdict> verdicts;
  std::vector<std::string> artifacts;
  bool all_pass = false;
};

/// Runs acceptance criteria 1-9 at their stated tolerances, writing the
/// full artifact suite under outdir. Deterministic in seed. (Criterion 10,
/// byte-identity of two report runs, is checked externally by running the
/// CLI twice.)
CriteriaResults evaluate_criteria(const std::string& outdir, std::uint64_t seed);

/// Full pipeline + summary.json (criteria verdicts and an FNV fingerprint
/// of every artifact written). Returns process exit code.
int run_report(const ExperimentConfig& cfg);

/// Aggregate-only: re-emit summary from existing artifacts, refusing
/// mismatched schema versions.
int run_report_aggregate(const std::string& dir);

}  // namespace experiment
}  // namespace legendrix

#endif
