#include "legendrix/reduction.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <sstream>

namespace legendrix {
namespace reduction {

using std::complex;

std::string to_string(Stratum s) {
  switch (s) {
    case Stratum::X1: return "X1";
    case Stratum::X0_only: return "X0_only";
    case Stratum::singular: return "singular";
  }
  return "?";
}

// ---------------------------------------------------------------- sphere

RotatingSphere::RotatingSphere() : alg_(lie::circle_algebra()) {}

Mat RotatingSphere::metric(const Vec& p) const {
  if (!in_chart(p)) throw std::invalid_argument("sphere: point outside chart");
  Mat g = Mat::Zero(2, 2);
  double s = std::sin(p(0));
  g(0, 0) = 1.0;
  g(1, 1) = s * s;
  return g;
}

Mat RotatingSphere::action_fields(const Vec& p) const {
  if (!in_chart(p)) throw std::invalid_argument("sphere: point outside chart");
  Mat v = Mat::Zero(2, 1);
  v(1, 0) = 1.0;  // d/dphi
  return v;
}

Vec RotatingSphere::quotient_y(const Vec& p) const {
  Vec y(1);
  y << p(0);
  return y;
}

double RotatingSphere::quotient_z(const Vec& p) const { return p(0); }

bool RotatingSphere::in_chart(const Vec& p) const {
  return p.size() == 2 && p(0) > 0.0 && p(0) < M_PI && std::isfinite(p(1));
}

Vec RotatingSphere::group_translate(const Vec& p, const Vec& v, double t) const {
  Vec q = p;
  q(1) += v(0) * t;
  return q;
}

Vec RotatingSphere::base_point_for_z(double z) const {
  Vec p(2);
  p << z, 0.0;
  if (!in_chart(p)) throw std::invalid_argument("sphere: z outside (0, pi)");
  return p;
}

Vec RotatingSphere::random_chart_point(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> th(0.2, M_PI - 0.2), ph(0.0, 2 * M_PI);
  Vec p(2);
  p << th(rng), ph(rng);
  return p;
}

// ---------------------------------------------------------------- CP^2

namespace {

using C2 = Eigen::Vector2cd;

C2 to_complex(const Vec& p) { return C2(complex<double>(p(0), p(1)), complex<double>(p(2), p(3))); }

Vec to_real(const C2& z) {
  Vec p(4);
  p << z(0).real(), z(0).imag(), z(1).real(), z(1).imag();
  return p;
}

Eigen::Matrix2cd pauli2(int a) {
  Eigen::Matrix2cd s;
  const complex<double> I(0, 1);
  switch (a) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, -I, I, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

// Fubini-Study inner product of chart tangents (complex representation):
// g(u, v) = 2 Re[ (v^dag u)/s - (zbar.u)(conj(zbar.v))/s^2 ],  s = 1 + |z|^2.
double fs_inner(const C2& z, const C2& u, const C2& v) {
  double s = 1.0 + z.squaredNorm();
  complex<double> uv = v.dot(u);  // Eigen dot conjugates the first argument
  complex<double> zbar_u = std::conj(z(0)) * u(0) + std::conj(z(1)) * u(1);
  complex<double> zbar_v = std::conj(z(0)) * v(0) + std::conj(z(1)) * v(1);
  complex<double> val = uv / s - zbar_u * std::conj(zbar_v) / (s * s);
  return 2.0 * val.real();
}

}  // namespace

Cp2Su2::Cp2Su2() : alg_(lie::build_algebra(lie::AlgebraName::su2)) {}

Mat Cp2Su2::metric(const Vec& p) const {
  if (!in_chart(p)) throw std::invalid_argument("cp2: point outside chart");
  C2 z = to_complex(p);
  // real basis vectors as complex tangents
  C2 basis[4] = {C2(1, 0), C2(complex<double>(0, 1), 0), C2(0, 1),
                 C2(0, complex<double>(0, 1))};
  Mat g(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) g(i, j) = g(j, i) = fs_inner(z, basis[i], basis[j]);
  return g;
}

Mat Cp2Su2::action_fields(const Vec& p) const {
  if (!in_chart(p)) throw std::invalid_argument("cp2: point outside chart");
  C2 z = to_complex(p);
  Mat v(4, 3);
  const complex<double> I(0, 1);
  for (int a = 0; a < 3; ++a) v.col(a) = to_real(C2(-0.5 * I * (pauli2(a) * z)));
  return v;
}

Vec Cp2Su2::quotient_y(const Vec& p) const {
  // (z, n3/r^2, arg(z1 z2)): T-invariants; the angular entry is chart-degenerate
  // on z1 z2 = 0 and is only used as a diagnostic label.
  C2 z = to_complex(p);
  double r2 = z.squaredNorm();
  double n3 = std::norm(z(0)) - std::norm(z(1));
  complex<double> prod = z(0) * z(1);
  Vec y(3);
  y << r2, (r2 > 0 ? n3 / r2 : 0.0), (std::abs(prod) > 0 ? std::arg(prod) : 0.0);
  return y;
}

double Cp2Su2::quotient_z(const Vec& p) const { return to_complex(p).squaredNorm(); }

bool Cp2Su2::in_chart(const Vec& p) const { return p.size() == 4 && p.allFinite(); }

Vec Cp2Su2::group_translate(const Vec& p, const Vec& v, double t) const {
  // exp(t v) acts linearly on the affine chart: z -> exp(-(i/2) t v.sigma) z
  C2 z = to_complex(p);
  Eigen::Matrix2cd H = Eigen::Matrix2cd::Zero();
  for (int a = 0; a < 3; ++a) H += v(a) * pauli2(a);
  double nv = v.norm();
  Eigen::Matrix2cd U;
  if (nv < 1e-300) {
    U = Eigen::Matrix2cd::Identity();
  } else {
    double half = 0.5 * t * nv;
    U = std::cos(half) * Eigen::Matrix2cd::Identity() -
        complex<double>(0, 1) * (std::sin(half) / nv) * H;
  }
  return to_real(C2(U * z));
}

Vec Cp2Su2::base_point_for_z(double z) const {
  if (!(z > 0.0)) throw std::invalid_argument("cp2: quotient coordinate must be > 0");
  Vec p(4);
  p << std::sqrt(z), 0.0, 0.0, 0.0;
  return p;
}

Vec Cp2Su2::random_chart_point(std::mt19937_64& rng) const {
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (true) {
    Vec p(4);
    for (int i = 0; i < 4; ++i) p(i) = gauss(rng);
    double r2 = p.squaredNorm();
    if (r2 > 0.1 && r2 < 20.0) return p;
  }
}

std::unique_ptr<ModelManifold> make_model(const std::string& name) {
  if (name == "sphere_s1") return std::make_unique<RotatingSphere>();
  if (name == "cp2_su2") return std::make_unique<Cp2Su2>();
  throw std::invalid_argument("unknown model '" + name + "' (sphere_s1 | cp2_su2)");
}

// ---------------------------------------------------------------- operations

Mat gram_matrix(const ModelManifold& model, const Vec& p) {
  Mat g = model.metric(p);
  Mat v = model.action_fields(p);
  return v.transpose() * g * v;
}

StabilizerInfo stabilizer_rank(const ModelManifold& model, const Vec& p, double tol) {
  Mat G = gram_matrix(model, p);
  Eigen::SelfAdjointEigenSolver<Mat> es(G, Eigen::EigenvaluesOnly);
  double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
  int deficiency = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) <= tol * scale) ++deficiency;
  StabilizerInfo info;
  info.stabilizer_dim = deficiency;
  if (deficiency == 0) {
    info.label = Stratum::X1;
    return info;
  }
  // Cartan-restricted Gram
  const auto& alg = model.algebra();
  Mat GT(alg.cartan_dim, alg.cartan_dim);
  for (int i = 0; i < alg.cartan_dim; ++i)
    for (int j = 0; j < alg.cartan_dim; ++j)
      GT(i, j) = G(alg.cartan_indices[i], alg.cartan_indices[j]);
  Eigen::SelfAdjointEigenSolver<Mat> esT(GT, Eigen::EigenvaluesOnly);
  info.label = (esT.eigenvalues().minCoeff() > tol * scale) ? Stratum::X0_only
                                                            : Stratum::singular;
  return info;
}

AlphaResult alpha_mu(const ModelManifold& model, const Vec& p, const Vec& mu) {
  const auto& alg = model.algebra();
  if (mu.size() != alg.dim) throw std::invalid_argument("alpha_mu: mu must live in g*");
  Mat G = gram_matrix(model, p);
  Eigen::LDLT<Mat> ldlt(G);
  // pivot tolerance: treat tiny pivots as stratum degeneracy, not noise
  Eigen::SelfAdjointEigenSolver<Mat> es(G, Eigen::EigenvaluesOnly);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() <= 1e-12 * scale) {
    StabilizerInfo info = stabilizer_rank(model, p);
    throw numerical_error("alpha_mu: Gram matrix singular at stratum " +
                          to_string(info.label) +
                          " (points of the moment level escape to infinity here)");
  }
  AlphaResult r;
  r.coeffs = ldlt.solve(mu);
  Vec u = model.action_fields(p) * r.coeffs;  // tangent vector sum_j c_j v_j
  r.covector = model.metric(p) * u;           // metric-dual
  r.w = mu.dot(r.coeffs);
  return r;
}

double effective_w(const ModelManifold& model, const Vec& p, const Vec& mu) {
  return alpha_mu(model, p, mu).w;
}

PropernessVerdict properness_probe(const ModelManifold& model, const Vec& mu,
                                   const std::vector<Vec>& path, double bound) {
  if (path.size() < 3) throw std::invalid_argument("properness_probe: path too short");
  PropernessVerdict v;
  for (const auto& p : path) {
    if (!model.in_chart(p)) throw std::invalid_argument("properness_probe: path leaves chart");
    v.values.push_back(effective_w(model, p, mu));
  }
  v.max_w = *std::max_element(v.values.begin(), v.values.end());
  v.tail_increasing = true;
  std::size_t tail = v.values.size() / 2;
  for (std::size_t i = tail; i + 1 < v.values.size(); ++i)
    if (v.values[i + 1] <= v.values[i]) v.tail_increasing = false;
  v.diverging = v.tail_increasing && v.values.back() >= bound;
  return v;
}

FiberProfile fiber_profile(const ModelManifold& model, double z,
                           const lie::WeylChamberPoint& mu, int n_samples,
                           std::uint64_t sample_seed) {
  const auto& alg = model.algebra();
  if (alg.name == lie::AlgebraName::circle)
    throw std::invalid_argument("fiber_profile: trivial fiber on an abelian model; "
                                "the restriction is the single value mu^2 w(z)");
  Vec p0 = model.base_point_for_z(z);
  Mat G = gram_matrix(model, p0);
  Mat B = G.inverse();
  B = 0.5 * (B + B.transpose());
  FiberProfile prof{z, morse::QuadraticForm(B), 0.0, Vec(), 1, {}};

  Eigen::SelfAdjointEigenSolver<Mat> es(B);
  Vec mu_emb = lie::embed_chamber(alg, mu);
  double mu2 = mu_emb.squaredNorm();
  double lmin = es.eigenvalues()(0);
  prof.fiber_min = lmin * mu2;
  prof.fiber_min_direction = es.eigenvectors().col(0);
  prof.min_multiplicity = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) <= lmin * (1 + 1e-9)) ++prof.min_multiplicity;

  if (n_samples > 0) {
    auto rng = num::rng_stream(sample_seed, 0);
    for (int s = 0; s < n_samples; ++s) {
      Vec xi = lie::random_orbit_point(alg, mu_emb, rng);
      prof.sample_values.push_back(xi.dot(B * xi));
    }
  }
  return prof;
}

double kinetic_profile(const ModelManifold& model, double z) {
  const auto& alg = model.algebra();
  Vec p0 = model.base_point_for_z(z);
  if (alg.name == lie::AlgebraName::circle) {
    Vec mu1(1);
    mu1 << 1.0;
    return effective_w(model, p0, mu1);
  }
  // lambda_min(G^{-1}) = 1 / lambda_max(G)
  Mat G = gram_matrix(model, p0);
  Eigen::SelfAdjointEigenSolver<Mat> es(G, Eigen::EigenvaluesOnly);
  double lmax = es.eigenvalues().maxCoeff();
  if (lmax <= 0.0) throw numerical_error("kinetic_profile: degenerate Gram at z");
  return 1.0 / lmax;
}

std::string export_field_csv(const ModelManifold& model, const std::vector<Vec>& points,
                             const Vec& mu) {
  std::ostringstream oss;
  oss << "# legendrix schema_version=1 kind=reduction_field model=" << model.name() << "\n";
  int d = model.algebra().dim;
  oss << "p0,p1,p2,p3";
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) oss << ",G" << i << j;
  oss << ",W\n";
  char buf[64];
  for (const auto& p : points) {
    for (int i = 0; i < 4; ++i) {
      double v = (i < p.size()) ? p(i) : 0.0;
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      oss << (i ? "," : "") << buf;
    }
    Mat G = gram_matrix(model, p);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", G(i, j));
        oss << "," << buf;
      }
    std::snprintf(buf, sizeof(buf), "%.17g", effective_w(model, p, mu));
    oss << "," << buf << "\n";
  }
  return oss.str();
}

}  // namespace reduction
}  // namespace legendrix
