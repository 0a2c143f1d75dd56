#ifndef LEGENDRIX_LIE_CORE_HPP
#define LEGENDRIX_LIE_CORE_HPP

#include <random>
#include <string>
#include <vector>

#include "legendrix/numerics.hpp"

namespace legendrix {
namespace lie {

/// Exact finite-dimensional models of compact Lie algebras and their duals.
///
/// Conventions (fixed once, used everywhere):
///  * su(2): basis e_a = -(i/2) sigma_a, so c_ijk = epsilon_ijk and the
///    computed Killing form is -2 I3.
///  * su(3): basis x_a = -i lambda_a (Gell-Mann), so the pairwise trace
///    form is tr(x_a x_b) = -2 delta_ab, the structure constants are
///    2 f_abc, and the computed Killing form is -12 I8.
///  * g* carries basis-dual coordinates: xi_a = xi(e_a). A chamber point
///    mu in t* embeds into g* by zero on the non-Cartan coordinates.
///  * Coadjoint pairing: <ad*_v xi, w> = <xi, [w, v]>, which makes
///    coadjoint_flow(v, t) = Ad*_{exp(tv)} a left action.
///  * The positive "Killing form C" on g* of the perturbation family is
///    the matrix -K in dual coordinates (2 I for su(2), 12 I for su(3));
///    it is constant on coadjoint orbits.
///
/// In these bases the invariant form is proportional to the identity, so
/// the coadjoint action matrix on dual coordinates coincides with the
/// adjoint action matrix on basis coordinates; the tests rely on this.

enum class AlgebraName { su2, su3, circle };

std::string to_string(AlgebraName n);

/// Int t*_+ as strict linear inequalities: normals * mu > 0 componentwise.
struct WeylChamber {
  Mat normals;             // rows are inequality normals
  std::string description;
  bool contains(const Vec& mu) const;
  double margin(const Vec& mu) const;  // min slack; > 0 iff strictly interior
};

struct LieAlgebraModel {
  AlgebraName name = AlgebraName::su2;
  int dim = 0;                  // d: 3 (su2), 8 (su3), 1 (circle)
  int cartan_dim = 0;           // 1 (su2, circle), 2 (su3)
  std::vector<Mat> ad;          // ad[a](k,j) = c_ajk, so ad(v) = sum_a v_a ad[a]
  Mat killing;                  // K_ab = tr(ad_a ad_b), computed not hardcoded
  std::vector<int> cartan_indices;
  WeylChamber chamber;

  double structure(int i, int j, int k) const { return ad[i](k, j); }
  /// [v, w] in basis coordinates.
  Vec bracket(const Vec& v, const Vec& w) const;
  /// The positive form C = -K on g* (dual coordinates).
  Mat killing_dual_form() const { return -killing; }
};

/// Builds su(2) or su(3) from the structure constants above and checks
/// antisymmetry, Jacobi, Killing negative-definiteness and invariance.
LieAlgebraModel build_algebra(AlgebraName name);

/// The abelian S^1 algebra used by the rotating-sphere model (d = 1,
/// c = 0, K = [0]); kept out of build_algebra so the compact-type
/// invariants stay strict there.
LieAlgebraModel circle_algebra();

/// Max |c_ijm c_mkl + c_jkm c_mil + c_kim c_mjl| over all index tuples.
double jacobi_residual(const LieAlgebraModel& alg);

struct WeylChamberPoint {
  AlgebraName algebra;
  Vec mu;  // t* coordinates (dim = cartan_dim)
};

/// Validates strict chamber membership.
WeylChamberPoint make_chamber_point(const LieAlgebraModel& alg, const Vec& mu);
WeylChamberPoint make_chamber_point(const LieAlgebraModel& alg, double mu);

/// Zero-extension t* -> g* on the non-Cartan coordinates.
Vec embed_chamber(const LieAlgebraModel& alg, const WeylChamberPoint& mu);

/// Casimir invariants of xi: su(2)/circle: |xi|^2; su(3): (tr M^2, tr M^3)
/// of the associated Hermitian matrix M(xi) = sum xi_a lambda_a.
Vec casimirs(const LieAlgebraModel& alg, const Vec& xi);

/// Max relative mismatch of the Casimirs of xi against those of the
/// embedded base point.
double casimir_residual(const LieAlgebraModel& alg, const Vec& xi, const Vec& mu_embedded);

struct OrbitPoint {
  Vec xi;                    // g* ambient coordinates
  WeylChamberPoint base_mu;  // the orbit label
  double casimir_tol = 1e-10;
};

OrbitPoint make_orbit_point(const LieAlgebraModel& alg, const Vec& xi,
                            const WeylChamberPoint& base_mu, double casimir_tol = 1e-10);

/// ad*_v xi with the pairing convention above: (ad*_v xi)_a = sum_jk v_j c_ajk xi_k.
Vec coadjoint_infinitesimal(const LieAlgebraModel& alg, const Vec& v, const Vec& xi);

/// Matrix of ad*_v on dual coordinates (equals the adjoint matrix here).
Mat coadjoint_matrix(const LieAlgebraModel& alg, const Vec& v);

/// Ad*_{exp(tv)} xi: exact one-parameter flow through the Hermitian matrix
/// model (unitary conjugation), re-projected onto the Casimir level set of
/// the base point. Throws numerical_error if the projection cannot reach
/// casimir_tol.
OrbitPoint coadjoint_flow(const LieAlgebraModel& alg, const Vec& v, double t,
                          const OrbitPoint& start);

/// Closest point with the Casimir data of mu_embedded (isospectral
/// projection via the Hermitian model).
Vec project_to_orbit(const LieAlgebraModel& alg, const Vec& xi, const Vec& mu_embedded);

/// dim O_mu = d - dim stab(mu); 2 for su(2), 6 for regular su(3), 0 abelian.
int orbit_dim(const LieAlgebraModel& alg, const WeylChamberPoint& mu);

/// Columns are the spanning tangent vectors ad*_{e_a} xi, a = 0..d-1.
Mat orbit_tangent_span(const LieAlgebraModel& alg, const Vec& xi);

/// Pseudo-Haar random orbit point Ad*_g mu_embedded (deterministic in rng).
Vec random_orbit_point(const LieAlgebraModel& alg, const Vec& mu_embedded,
                       std::mt19937_64& rng);

/// d x d matrix of Ad*_{exp(tv)} on dual coordinates (an isometry of the
/// invariant form; no Casimir projection applied).
Mat coadjoint_group_matrix(const LieAlgebraModel& alg, const Vec& v, double t);

/// Hermitian matrix model M(xi) (2x2 sigma basis or 3x3 lambda basis);
/// circle has the trivial 1x1 model [xi].
CMat hermitian_model(const LieAlgebraModel& alg, const Vec& xi);
Vec coords_from_model(const LieAlgebraModel& alg, const CMat& M);

}  // namespace lie
}  // namespace legendrix

#endif
