#ifndef LEGENDRIX_ORBIT_MORSE_HPP
#define LEGENDRIX_ORBIT_MORSE_HPP

#include <optional>
#include <vector>

#include "legendrix/lie_core.hpp"

namespace legendrix {
namespace morse {

/// Critical-point analysis of the restriction of a positive definite
/// quadratic form B on g* to a coadjoint orbit, plus the statistical
/// genericity experiment.

class QuadraticForm {
public:
  /// Requires symmetry within 1e-14 and positive definiteness.
  explicit QuadraticForm(const Mat& matrix);
  const Mat& matrix() const { return m_; }
  double operator()(const Vec& xi) const { return xi.dot(m_ * xi); }
  Vec gradient(const Vec& xi) const { return 2.0 * (m_ * xi); }
  int dim() const { return static_cast<int>(m_.rows()); }

private:
  Mat m_;
};

struct CriticalPointRecord {
  Vec point;
  double value = 0.0;
  int morse_index = -1;           // defined only when nondegenerate
  double min_abs_hessian_eig = 0.0;
  double max_abs_hessian_eig = 0.0;
  bool nondegenerate = false;
  bool converged = true;          // refinement failures are flagged, not dropped
  Vec hessian_eigs;               // orbit Hessian spectrum (dim O entries)
};

struct MultistartConfig {
  int seeds = 64;
  std::uint64_t seed = 20240u;
  int max_newton_iter = 120;
  double residual_tol = 1e-12;    // relative to |B| mu^2
  double dedup_tol = 1e-6;        // ambient norm
  double hessian_tol_rel = 1e-8;  // relative to max(|Hessian eig|, |B|_2)
  double value_tol_rel = 1e-9;    // critical-value ties
  // Hessian difference step (Richardson once). Larger than the forward
  // tolerances: the isospectral retraction carries eigensolver roundoff
  // ~1e-15 per call, and the second-difference noise 4 eps / h^2 must stay
  // below hessian_tol_rel * |B|_2 for degenerate controls to be flagged.
  double fd_step = 5e-3;
};

struct OrbitGradient {
  Vec coeffs;    // minimal-norm coefficients over the ad*-tangent span
  Vec ambient;   // projected Riemannian gradient in ambient coordinates
  double norm = 0.0;
};

/// rho_B(xi) = xi^T B xi (the restriction is evaluation on orbit points).
double restrict_form(const QuadraticForm& B, const lie::OrbitPoint& xi);

/// Riemannian gradient of B|_O at xi in the induced (ambient) metric,
/// expressed over the spanning set {ad*_{e_a} xi}. Throws if the span is
/// rank-deficient (non-regular point).
OrbitGradient orbit_gradient(const lie::LieAlgebraModel& alg, const QuadraticForm& B,
                             const Vec& xi);

struct CriticalSet {
  std::vector<CriticalPointRecord> records;  // sorted by (value, lex point)
  bool saturated = false;  // no new point found in the last half of the seeds
  int orbit_dim = 0;
};

/// Deduplicated critical set of B|_{O_mu} by multistart Newton on the
/// stationarity system (ambient gradient in the orbit normal span, Casimir
/// constraints), deterministic for a fixed seed. Hessians are measured by
/// second-order central differences along tangent directions through the
/// isospectral retraction, Richardson-extrapolated once.
CriticalSet critical_points(const lie::LieAlgebraModel& alg, const QuadraticForm& B,
                            const lie::WeylChamberPoint& mu, const MultistartConfig& cfg);

struct MorseReport {
  bool is_morse = false;         // every converged critical point nondegenerate
  bool distinct_values = false;  // critical levels distinct up to the +/- symmetry
  int n_unconverged = 0;         // refinement failures (flagged in records)
  CriticalSet critical;
};

MorseReport is_morse(const lie::LieAlgebraModel& alg, const QuadraticForm& B,
                     const lie::WeylChamberPoint& mu, const MultistartConfig& cfg);

struct GenericityFailure {
  int form_index = -1;   // -1 for injected controls
  std::string label;
  Vec mu;
  bool is_morse = false;
  bool distinct_values = false;
};

struct GenericityReport {
  int n_forms = 0;
  int n_orbits = 0;
  double fraction_morse = 0.0;     // over the random forms only
  std::vector<GenericityFailure> failures;
  bool controls_flagged = false;   // injected degenerate controls all non-Morse
  bool all_saturated = true;
};

/// Samples B = A^T A + eps I with A ~ N(0,1)^{d x d} (eps = 1e-6) and runs
/// is_morse on every (B, mu) pair; optionally injects B = Identity as a
/// degenerate control which must land in `failures`.
GenericityReport genericity_sample(const lie::LieAlgebraModel& alg, int n_forms,
                                   const std::vector<lie::WeylChamberPoint>& orbit_mus,
                                   std::uint64_t seed, bool inject_controls = true,
                                   const MultistartConfig& cfg = {});

}  // namespace morse
}  // namespace legendrix

#endif
