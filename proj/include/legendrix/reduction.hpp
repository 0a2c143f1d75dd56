#ifndef LEGENDRIX_REDUCTION_HPP
#define LEGENDRIX_REDUCTION_HPP

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "legendrix/lie_core.hpp"
#include "legendrix/orbit_morse.hpp"

namespace legendrix {
namespace reduction {

/// Model G-manifolds with invariant metrics, moment-map Gram matrices,
/// strata detection, the one-form alpha_mu and the kinetic term
/// W(p, mu) = <alpha_mu, alpha_mu>.
///
/// alpha_mu is computed from its characterization: it is metric-dual to a
/// combination u = sum_j c_j v_{j,X} of action fields (that is the
/// orthogonality to ker phi_p), and <v_{i,X}, alpha_mu> = mu_i forces
/// G(p) c = mu with G the Gram matrix of the action fields. Hence
/// W(p, mu) = mu^T G(p)^{-1} mu. The moment-compatibility test checks
/// both clauses of the characterization directly.

enum class Stratum { X1, X0_only, singular };

std::string to_string(Stratum s);

class ModelManifold {
public:
  virtual ~ModelManifold() = default;

  virtual std::string name() const = 0;
  virtual int dim_x() const = 0;
  virtual const lie::LieAlgebraModel& algebra() const = 0;

  /// Chart metric, dim_x x dim_x symmetric positive definite.
  virtual Mat metric(const Vec& p) const = 0;
  /// Columns are the action fields v_{a,X}(p), a = 0..d-1, in chart tangents.
  virtual Mat action_fields(const Vec& p) const = 0;
  /// (y on X0/T, z on X1/G); y may be chart-dependent, z is the invariant
  /// the forward/inverse pipeline consumes.
  virtual Vec quotient_y(const Vec& p) const = 0;
  virtual double quotient_z(const Vec& p) const = 0;
  virtual bool in_chart(const Vec& p) const = 0;

  /// Chart action of exp(t v), v in basis coordinates of the algebra.
  virtual Vec group_translate(const Vec& p, const Vec& v, double t) const = 0;
  /// A chart point over the quotient coordinate z (used for fiber data).
  virtual Vec base_point_for_z(double z) const = 0;
  /// Default z-window for minimization / inversion.
  virtual std::pair<double, double> z_window() const = 0;
  /// Deterministic sample point away from degenerate strata (for tests).
  virtual Vec random_chart_point(std::mt19937_64& rng) const = 0;
};

/// T = G = S^1 rotating the unit round sphere; chart (theta, phi) with
/// theta in (0, pi). G = [sin^2 theta], W = mu^2 / sin^2 theta, y = z = theta.
class RotatingSphere final : public ModelManifold {
public:
  RotatingSphere();
  std::string name() const override { return "sphere_s1"; }
  int dim_x() const override { return 2; }
  const lie::LieAlgebraModel& algebra() const override { return alg_; }
  Mat metric(const Vec& p) const override;
  Mat action_fields(const Vec& p) const override;
  Vec quotient_y(const Vec& p) const override;
  double quotient_z(const Vec& p) const override;
  bool in_chart(const Vec& p) const override;
  Vec group_translate(const Vec& p, const Vec& v, double t) const override;
  Vec base_point_for_z(double z) const override;
  std::pair<double, double> z_window() const override { return {0.05, M_PI - 0.05}; }
  Vec random_chart_point(std::mt19937_64& rng) const override;

private:
  lie::LieAlgebraModel alg_;
};

/// SU(2) in SU(3) fixing (0,0,1), acting on CP^2 with the Fubini-Study
/// metric (Kahler potential log(1+|z|^2), g = 2 Re h) in the affine chart
/// [z1 : z2 : 1], p = (Re z1, Im z1, Re z2, Im z2). The global fixed point
/// is the chart origin; the circle-stabilizer line {w = 0} sits at chart
/// infinity. Quotient coordinate z = |z1|^2 + |z2|^2, identifying
/// X1/SU(2) = (0, infinity).
class Cp2Su2 final : public ModelManifold {
public:
  Cp2Su2();
  std::string name() const override { return "cp2_su2"; }
  int dim_x() const override { return 4; }
  const lie::LieAlgebraModel& algebra() const override { return alg_; }
  Mat metric(const Vec& p) const override;
  Mat action_fields(const Vec& p) const override;
  Vec quotient_y(const Vec& p) const override;
  double quotient_z(const Vec& p) const override;
  bool in_chart(const Vec& p) const override;
  Vec group_translate(const Vec& p, const Vec& v, double t) const override;
  Vec base_point_for_z(double z) const override;
  std::pair<double, double> z_window() const override { return {0.05, 8.0}; }
  Vec random_chart_point(std::mt19937_64& rng) const override;

private:
  lie::LieAlgebraModel alg_;
};

std::unique_ptr<ModelManifold> make_model(const std::string& name);

/// G_ij(p) = metric(v_{i,X}(p), v_{j,X}(p)).
Mat gram_matrix(const ModelManifold& model, const Vec& p);

struct StabilizerInfo {
  int stabilizer_dim = 0;
  Stratum label = Stratum::X1;
};

/// Rank deficiency of G(p) at tolerance tol; X1 iff G invertible, X0_only
/// iff only the Cartan block is, singular otherwise.
StabilizerInfo stabilizer_rank(const ModelManifold& model, const Vec& p, double tol = 1e-9);

struct AlphaResult {
  Vec coeffs;     // c = G(p)^{-1} mu over the action fields
  Vec covector;   // alpha_mu(p) in chart cotangent coordinates
  double w = 0.0; // <alpha_mu, alpha_mu> = mu^T G^{-1} mu
};

/// mu is given in g* dual coordinates (use lie::embed_chamber for t*
/// points). Throws naming the stratum when G is singular at p.
AlphaResult alpha_mu(const ModelManifold& model, const Vec& p, const Vec& mu);

double effective_w(const ModelManifold& model, const Vec& p, const Vec& mu);

struct PropernessVerdict {
  bool diverging = false;     // tail increasing and max beyond the bound
  bool tail_increasing = false;
  double max_w = 0.0;
  std::vector<double> values;
};

/// W along a path of chart points approaching a degenerate stratum.
PropernessVerdict properness_probe(const ModelManifold& model, const Vec& mu,
                                   const std::vector<Vec>& path, double bound = 1e4);

struct FiberProfile {
  double z = 0.0;
  morse::QuadraticForm form;       // B_z on g*, the inverse Gram at a base point
  double fiber_min = 0.0;          // min of B_z over O_mu = mu^2 * lambda_min(B_z)
  Vec fiber_min_direction;         // unit minimizer direction in g*
  int min_multiplicity = 1;        // eigenvalue multiplicity of lambda_min
  std::vector<double> sample_values;  // B_z sampled over O_mu
};

/// Restriction of W to the gamma-fiber over z, identified with the
/// quadratic form B_z = G(x0(z))^{-1} on g* restricted to O_mu
/// (x0(z) a base point over z). Throws for abelian models (trivial fiber).
FiberProfile fiber_profile(const ModelManifold& model, double z,
                           const lie::WeylChamberPoint& mu, int n_samples = 0,
                           std::uint64_t sample_seed = 1);

/// Fiber-minimized kinetic profile w(z) = lambda_min(B_z); for abelian
/// models this is W(p(z), mu=1) itself. effective W on the Z-level is
/// mu^2 * kinetic_profile(z).
double kinetic_profile(const ModelManifold& model, double z);

/// CSV export of sampled reduction data: p-coordinates, Gram entries, W.
std::string export_field_csv(const ModelManifold& model, const std::vector<Vec>& points,
                             const Vec& mu);

}  // namespace reduction
}  // namespace legendrix

#endif
