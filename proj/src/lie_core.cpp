#include "legendrix/lie_core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace legendrix {
namespace lie {

std::string to_string(AlgebraName n) {
  switch (n) {
    case AlgebraName::su2: return "su2";
    case AlgebraName::su3: return "su3";
    case AlgebraName::circle: return "circle";
  }
  return "?";
}

bool WeylChamber::contains(const Vec& mu) const { return margin(mu) > 0.0; }

double WeylChamber::margin(const Vec& mu) const {
  if (normals.cols() != mu.size()) throw std::invalid_argument("chamber: dimension mismatch");
  return (normals * mu).minCoeff();
}

Vec LieAlgebraModel::bracket(const Vec& v, const Vec& w) const {
  Mat advm = Mat::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) advm += v(a) * ad[a];
  return advm * w;
}

namespace {

// Totally antisymmetric structure tensor, stored as ad matrices.
std::vector<Mat> ad_from_entries(int d, const std::vector<std::tuple<int, int, int, double>>& f) {
  // entries are (i, j, k, value) for c_ijk with i<j; antisymmetrized in (i,j),
  // full antisymmetry of the tensor comes from listing all (i<j, k) values.
  std::vector<Mat> ad(d, Mat::Zero(d, d));
  auto set = [&](int i, int j, int k, double v) {
    ad[i](k, j) = v;    // c_ijk
    ad[j](k, i) = -v;   // c_jik = -c_ijk
  };
  for (auto& [i, j, k, v] : f) set(i, j, k, v);
  return ad;
}

Mat killing_from_ad(const std::vector<Mat>& ad) {
  const int d = static_cast<int>(ad.size());
  Mat K(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) K(a, b) = (ad[a] * ad[b]).trace();
  return K;
}

void validate_compact(const LieAlgebraModel& alg) {
  // antisymmetry is structural (ad_from_entries); check Jacobi and Killing.
  if (jacobi_residual(alg) > 1e-12)
    throw numerical_error("build_algebra: Jacobi identity violated");
  Eigen::SelfAdjointEigenSolver<Mat> es(alg.killing);
  if (es.eigenvalues().maxCoeff() >= -1e-12)
    throw numerical_error("build_algebra: Killing form not negative definite");
  // invariance K([v,w],u) + K(w,[v,u]) = 0 on basis triples
  const int d = alg.dim;
  for (int v = 0; v < d; ++v)
    for (int w = 0; w < d; ++w)
      for (int u = 0; u < d; ++u) {
        Vec ev = Vec::Unit(d, v), ew = Vec::Unit(d, w), eu = Vec::Unit(d, u);
        double r = alg.bracket(ev, ew).dot(alg.killing * eu) +
                   ew.dot(alg.killing * alg.bracket(ev, eu));
        if (std::abs(r) > 1e-10) throw numerical_error("build_algebra: Killing invariance violated");
      }
}

}  // namespace

LieAlgebraModel build_algebra(AlgebraName name) {
  if (name != AlgebraName::su2 && name != AlgebraName::su3)
    throw std::invalid_argument("build_algebra: name must be su2 or su3");
  LieAlgebraModel alg;
  alg.name = name;
  if (name == AlgebraName::su2) {
    alg.dim = 3;
    alg.cartan_dim = 1;
    alg.ad = ad_from_entries(3, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0}});
    alg.cartan_indices = {2};
    alg.chamber.normals = Mat::Ones(1, 1);
    alg.chamber.description = "mu > 0";
  } else {
    alg.dim = 8;
    alg.cartan_dim = 2;
    const double s3 = std::sqrt(3.0) / 2.0;
    // c_abc = 2 f_abc in the -i*lambda basis; all independent f entries (0-based)
    std::vector<std::tuple<int, int, int, double>> ent;
    auto addf = [&](int i, int j, int k, double f) {
      // expand total antisymmetry: (i,j,k), (j,k,i), (k,i,j) with i<j pairs
      ent.emplace_back(i, j, k, 2 * f);
      ent.emplace_back(j, k, i, 2 * f);
      ent.emplace_back(i, k, j, -2 * f);
    };
    addf(0, 1, 2, 1.0);
    addf(0, 3, 6, 0.5);
    addf(0, 4, 5, -0.5);
    addf(1, 3, 5, 0.5);
    addf(1, 4, 6, 0.5);
    addf(2, 3, 4, 0.5);
    addf(2, 5, 6, -0.5);
    addf(3, 4, 7, s3);
    addf(5, 6, 7, s3);
    alg.ad = ad_from_entries(8, ent);
    alg.cartan_indices = {2, 7};
    // chamber: eigenvalues of diag(mu1 + mu2/sqrt3, -mu1 + mu2/sqrt3, -2 mu2/sqrt3)
    // strictly decreasing <=> mu1 > 0 and sqrt(3) mu2 > mu1
    alg.chamber.normals = Mat(2, 2);
    alg.chamber.normals << 1.0, 0.0, -1.0, std::sqrt(3.0);
    alg.chamber.description = "mu1 > 0, sqrt(3) mu2 > mu1";
  }
  alg.killing = killing_from_ad(alg.ad);
  validate_compact(alg);
  return alg;
}

LieAlgebraModel circle_algebra() {
  LieAlgebraModel alg;
  alg.name = AlgebraName::circle;
  alg.dim = 1;
  alg.cartan_dim = 1;
  alg.ad = {Mat::Zero(1, 1)};
  alg.killing = Mat::Zero(1, 1);
  alg.cartan_indices = {0};
  alg.chamber.normals = Mat::Ones(1, 1);
  alg.chamber.description = "mu > 0";
  return alg;
}

double jacobi_residual(const LieAlgebraModel& alg) {
  const int d = alg.dim;
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double r = 0.0;
          for (int m = 0; m < d; ++m)
            r += alg.structure(i, j, m) * alg.structure(m, k, l) +
                 alg.structure(j, k, m) * alg.structure(m, i, l) +
                 alg.structure(k, i, m) * alg.structure(m, j, l);
          worst = std::max(worst, std::abs(r));
        }
  return worst;
}

WeylChamberPoint make_chamber_point(const LieAlgebraModel& alg, const Vec& mu) {
  if (mu.size() != alg.cartan_dim) throw std::invalid_argument("chamber point: dimension mismatch");
  if (!alg.chamber.contains(mu))
    throw std::invalid_argument("chamber point: mu not strictly inside Int t*_+ (" +
                                alg.chamber.description + ")");
  return {alg.name, mu};
}

WeylChamberPoint make_chamber_point(const LieAlgebraModel& alg, double mu) {
  Vec m(1);
  m << mu;
  return make_chamber_point(alg, m);
}

Vec embed_chamber(const LieAlgebraModel& alg, const WeylChamberPoint& mu) {
  if (mu.algebra != alg.name) throw std::invalid_argument("embed_chamber: algebra mismatch");
  Vec xi = Vec::Zero(alg.dim);
  for (int i = 0; i < alg.cartan_dim; ++i) xi(alg.cartan_indices[i]) = mu.mu(i);
  return xi;
}

namespace {

CMat pauli(int a) {
  CMat s(2, 2);
  const std::complex<double> I(0, 1);
  switch (a) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, -I, I, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

CMat gellmann(int a) {
  CMat m = CMat::Zero(3, 3);
  const std::complex<double> I(0, 1);
  switch (a) {
    case 0: m(0, 1) = m(1, 0) = 1; break;
    case 1: m(0, 1) = -I; m(1, 0) = I; break;
    case 2: m(0, 0) = 1; m(1, 1) = -1; break;
    case 3: m(0, 2) = m(2, 0) = 1; break;
    case 4: m(0, 2) = -I; m(2, 0) = I; break;
    case 5: m(1, 2) = m(2, 1) = 1; break;
    case 6: m(1, 2) = -I; m(2, 1) = I; break;
    default: m(0, 0) = m(1, 1) = 1.0 / std::sqrt(3.0); m(2, 2) = -2.0 / std::sqrt(3.0); break;
  }
  return m;
}

}  // namespace

CMat hermitian_model(const LieAlgebraModel& alg, const Vec& xi) {
  switch (alg.name) {
    case AlgebraName::circle: {
      CMat m(1, 1);
      m(0, 0) = xi(0);
      return m;
    }
    case AlgebraName::su2: {
      CMat m = CMat::Zero(2, 2);
      for (int a = 0; a < 3; ++a) m += xi(a) * pauli(a);
      return m;
    }
    case AlgebraName::su3: {
      CMat m = CMat::Zero(3, 3);
      for (int a = 0; a < 8; ++a) m += xi(a) * gellmann(a);
      return m;
    }
  }
  throw std::logic_error("hermitian_model: unreachable");
}

Vec coords_from_model(const LieAlgebraModel& alg, const CMat& M) {
  Vec xi(alg.dim);
  if (alg.name == AlgebraName::circle) {
    xi(0) = M(0, 0).real();
    return xi;
  }
  for (int a = 0; a < alg.dim; ++a) {
    CMat basis = (alg.name == AlgebraName::su2) ? pauli(a) : gellmann(a);
    xi(a) = 0.5 * (basis * M).trace().real();  // tr(basis_a basis_b) = 2 delta_ab
  }
  return xi;
}

Vec casimirs(const LieAlgebraModel& alg, const Vec& xi) {
  if (alg.name == AlgebraName::su3) {
    CMat M = hermitian_model(alg, xi);
    Vec c(2);
    c(0) = (M * M).trace().real();
    c(1) = (M * M * M).trace().real();
    return c;
  }
  Vec c(1);
  c(0) = xi.squaredNorm();
  return c;
}

double casimir_residual(const LieAlgebraModel& alg, const Vec& xi, const Vec& mu_embedded) {
  Vec a = casimirs(alg, xi), b = casimirs(alg, mu_embedded);
  double worst = 0.0;
  for (int i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a(i) - b(i)) / std::max(1.0, std::abs(b(i))));
  return worst;
}

OrbitPoint make_orbit_point(const LieAlgebraModel& alg, const Vec& xi,
                            const WeylChamberPoint& base_mu, double casimir_tol) {
  Vec mu_emb = embed_chamber(alg, base_mu);
  double res = casimir_residual(alg, xi, mu_emb);
  if (res > casimir_tol)
    throw std::invalid_argument("orbit point: Casimir mismatch " + std::to_string(res));
  return {xi, base_mu, casimir_tol};
}

Vec coadjoint_infinitesimal(const LieAlgebraModel& alg, const Vec& v, const Vec& xi) {
  if (v.size() != alg.dim || xi.size() != alg.dim)
    throw std::invalid_argument("coadjoint_infinitesimal: dimension mismatch");
  const int d = alg.dim;
  Vec out = Vec::Zero(d);
  for (int a = 0; a < d; ++a) {
    double acc = 0.0;
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) acc += v(j) * alg.structure(a, j, k) * xi(k);
    out(a) = acc;
  }
  return out;
}

Mat coadjoint_matrix(const LieAlgebraModel& alg, const Vec& v) {
  const int d = alg.dim;
  Mat B(d, d);
  for (int a = 0; a < d; ++a)
    for (int k = 0; k < d; ++k) {
      double acc = 0.0;
      for (int j = 0; j < d; ++j) acc += v(j) * alg.structure(a, j, k);
      B(a, k) = acc;
    }
  return B;
}

Vec project_to_orbit(const LieAlgebraModel& alg, const Vec& xi, const Vec& mu_embedded) {
  if (alg.name != AlgebraName::su3) {
    // Casimir level set is the sphere |xi| = |mu|; circle orbits are points.
    if (alg.name == AlgebraName::circle) return mu_embedded;
    double nx = xi.norm();
    if (nx < 1e-300) throw numerical_error("project_to_orbit: zero vector");
    return xi * (mu_embedded.norm() / nx);
  }
  // Isospectral projection: keep the frame of M(xi), replace the spectrum by
  // the target's (both sorted ascending).
  CMat M = hermitian_model(alg, xi);
  Eigen::SelfAdjointEigenSolver<CMat> cur(M);
  Eigen::SelfAdjointEigenSolver<CMat> tgt(hermitian_model(alg, mu_embedded));
  if (cur.info() != Eigen::Success || tgt.info() != Eigen::Success)
    throw numerical_error("project_to_orbit: eigensolver failure");
  CMat fixed = cur.eigenvectors() * tgt.eigenvalues().asDiagonal() *
               cur.eigenvectors().adjoint();
  return coords_from_model(alg, fixed);
}

OrbitPoint coadjoint_flow(const LieAlgebraModel& alg, const Vec& v, double t,
                          const OrbitPoint& start) {
  if (v.size() != alg.dim) throw std::invalid_argument("coadjoint_flow: dimension mismatch");
  Vec mu_emb = embed_chamber(alg, start.base_mu);
  Vec xi_t;
  if (alg.name == AlgebraName::circle) {
    xi_t = start.xi;  // abelian: ad* = 0
  } else {
    // generator in the defining representation: su2: -(i/2) v.sigma, su3: -i v.lambda
    CMat gen = hermitian_model(alg, v);  // Hermitian H with group element exp(-i c t H)
    double scale = (alg.name == AlgebraName::su2) ? 0.5 : 1.0;
    Eigen::SelfAdjointEigenSolver<CMat> es(gen);
    if (es.info() != Eigen::Success) throw numerical_error("coadjoint_flow: generator eigensolve failed");
    CVec phase(gen.rows());
    for (Eigen::Index i = 0; i < gen.rows(); ++i)
      phase(i) = std::exp(std::complex<double>(0, -scale * t * es.eigenvalues()(i)));
    CMat U = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
    CMat Mt = U * hermitian_model(alg, start.xi) * U.adjoint();
    xi_t = coords_from_model(alg, Mt);
  }
  xi_t = project_to_orbit(alg, xi_t, mu_emb);
  double res = casimir_residual(alg, xi_t, mu_emb);
  if (res > start.casimir_tol)
    throw numerical_error("coadjoint_flow: Casimir projection residual " + std::to_string(res));
  return {xi_t, start.base_mu, start.casimir_tol};
}

int orbit_dim(const LieAlgebraModel& alg, const WeylChamberPoint& mu) {
  (void)mu;  // strictly interior by construction, so the orbit is regular
  switch (alg.name) {
    case AlgebraName::circle: return 0;
    case AlgebraName::su2: return 2;
    case AlgebraName::su3: return 6;  // mu strictly interior => regular orbit
  }
  return 0;
}

Mat orbit_tangent_span(const LieAlgebraModel& alg, const Vec& xi) {
  const int d = alg.dim;
  Mat T(d, d);
  for (int a = 0; a < d; ++a) T.col(a) = coadjoint_infinitesimal(alg, Vec::Unit(d, a), xi);
  return T;
}

Mat coadjoint_group_matrix(const LieAlgebraModel& alg, const Vec& v, double t) {
  const int d = alg.dim;
  if (alg.name == AlgebraName::circle) return Mat::Identity(1, 1);
  CMat gen = hermitian_model(alg, v);
  double scale = (alg.name == AlgebraName::su2) ? 0.5 : 1.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(gen);
  CVec phase(gen.rows());
  for (Eigen::Index i = 0; i < gen.rows(); ++i)
    phase(i) = std::exp(std::complex<double>(0, -scale * t * es.eigenvalues()(i)));
  CMat U = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  Mat R(d, d);
  for (int a = 0; a < d; ++a) {
    CMat Ma = hermitian_model(alg, Vec::Unit(d, a));
    R.col(a) = coords_from_model(alg, U * Ma * U.adjoint());
  }
  return R;
}

Vec random_orbit_point(const LieAlgebraModel& alg, const Vec& mu_embedded,
                       std::mt19937_64& rng) {
  if (alg.name == AlgebraName::circle) return mu_embedded;
  const int n = (alg.name == AlgebraName::su2) ? 2 : 3;
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMat> qr(A);
  CMat Q = qr.householderQ();
  CMat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    std::complex<double> r = R(i, i);
    Q.col(i) *= (std::abs(r) > 0) ? r / std::abs(r) : 1.0;
  }
  CMat M = Q * hermitian_model(alg, mu_embedded) * Q.adjoint();
  return coords_from_model(alg, M);
}

}  // namespace lie
}  // namespace legendrix
