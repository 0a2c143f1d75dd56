#ifndef LEGENDRIX_FORWARD_MAP_HPP
#define LEGENDRIX_FORWARD_MAP_HPP

#include <functional>
#include <string>
#include <vector>

#include "legendrix/reduction.hpp"

namespace legendrix {
namespace forward {

/// The spectral invariant F(mu) = min over the reduced space of
/// W(y, mu) + V_red, its minimizer map, and the fiberwise Morse
/// diagnostics.
///
/// Both shipped models satisfy dim Z = dim t* = 1 (dim X = dim G + dim T),
/// so the minimization is carried out at the Z level with the fiber
/// already minimized: h(z) = mu^2 * w(z) + V(z), w = kinetic_profile.
/// f_min records the Z-level minimizer (what the 1-D inversion consumes);
/// fiber degeneracy of the minimum (a critical circle for the round
/// Fubini-Study fibers, where condition (I) fails) is reported separately.

using ScalarPotential = std::function<double(double)>;

struct MinimizeConfig {
  int multistart = 32;
  std::uint64_t seed = 7u;
  double xtol_rel = 1e-12;        // of the window span
  double boundary_margin = 1e-4;  // U-membership margin in z units
  double value_tie_tol = 1e-10;
  int audit_points = 0;           // min-property audit samples
  double window_lo = 0.0, window_hi = 0.0;  // 0,0: use the model default
};

struct MinimizeResult {
  double F = 0.0;
  double f_min = 0.0;
  double hess_min_eig = 0.0;  // d^2/dz^2 of W + V at f_min
  int n_local_minima = 0;
  bool unique_min = false;
  bool in_U = false;          // interior minimizer with margin
  bool boundary_escape = false;
  int fiber_min_multiplicity = 1;
  double audit_max_violation = 0.0;
};

/// Evaluators of the effective potential W + gamma* V_red: on chart
/// representatives (all models; T-invariant by construction) and on the
/// Z quotient (fiber-minimized kinetic term).
std::function<double(const Vec&)> effective_potential_chart(
    const reduction::ModelManifold& model, const ScalarPotential& v_red, double mu);
std::function<double(double)> effective_potential_z(
    const reduction::ModelManifold& model, const ScalarPotential& v_red, double mu);

/// Deterministic multistart minimization of W + V over the z window.
/// mu is the t* coordinate (both models have 1-d Cartan duals).
/// Throws numerical_error when no minimum converges.
MinimizeResult minimize_F(const reduction::ModelManifold& model,
                          const ScalarPotential& v_red, double mu,
                          const MinimizeConfig& cfg);

struct SpectralPoint {
  double mu = 0.0;
  MinimizeResult min;
  bool ok = true;
  std::string error;
};

struct SpectralCurve {
  std::string model;
  std::vector<SpectralPoint> points;
  std::vector<int> jump_flags;   // indices where f_min jumps despite unique_min
  bool f_monotone = false;       // over the unique_min subgrid
  int monotone_dir = 0;          // +1 increasing, -1 decreasing, 0 n/a

  std::vector<double> mu_values() const;
  std::vector<double> f_values() const;
};

/// Per-mu minimize_F over a grid inside the chamber interior; per-point
/// failures are flagged, not fatal. Deterministic per-point seeds.
SpectralCurve spectral_curve(const reduction::ModelManifold& model,
                             const ScalarPotential& v_red,
                             const std::vector<double>& mu_grid,
                             const MinimizeConfig& cfg);

struct FiberVerdict {
  double z = 0.0;
  bool is_morse = false;
  bool distinct_values = false;
  int n_critical = 0;
  double min_abs_hessian_eig = 0.0;
};

struct ConditionIReport {
  std::vector<FiberVerdict> fibers;
  double morse_fraction = 0.0;
};

/// Runs orbit-morse on the fiber forms B_z over the sampled z's
/// (condition (I) in its orbit form). Non-abelian models only.
ConditionIReport condition_I_report(const reduction::ModelManifold& model, double mu,
                                    const std::vector<double>& z_samples,
                                    const morse::MultistartConfig& cfg = {});

}  // namespace forward
}  // namespace legendrix

#endif
