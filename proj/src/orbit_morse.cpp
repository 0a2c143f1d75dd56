#include "legendrix/orbit_morse.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace legendrix {
namespace morse {

using lie::LieAlgebraModel;
using lie::OrbitPoint;
using lie::WeylChamberPoint;

QuadraticForm::QuadraticForm(const Mat& matrix) : m_(matrix) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("QuadraticForm: not square");
  if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, m_.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("QuadraticForm: not symmetric");
  m_ = 0.5 * (m_ + m_.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("QuadraticForm: not positive definite");
}

double restrict_form(const QuadraticForm& B, const OrbitPoint& xi) { return B(xi.xi); }

OrbitGradient orbit_gradient(const LieAlgebraModel& alg, const QuadraticForm& B,
                             const Vec& xi) {
  if (B.dim() != alg.dim) throw std::invalid_argument("orbit_gradient: dimension mismatch");
  Mat T = lie::orbit_tangent_span(alg, xi);
  const int k = alg.dim - alg.cartan_dim;  // dim O at regular points
  if (alg.name == lie::AlgebraName::circle) return {Vec::Zero(1), Vec::Zero(1), 0.0};
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(T);
  cod.setThreshold(1e-10);
  if (cod.rank() < k)
    throw numerical_error("orbit_gradient: tangent span rank " + std::to_string(cod.rank()) +
                          " < dim O = " + std::to_string(k) + " (degenerate orbit point)");
  Vec g = B.gradient(xi);
  Vec c = cod.solve(g);  // minimal-norm least squares: T c = P_tangent g
  Vec ambient = T * c;
  return {c, ambient, ambient.norm()};
}

namespace {

// Cached Hermitian basis and symmetrized pair products for the su(3)
// stationarity Jacobian.
struct ModelCache {
  std::vector<CMat> basis;
  std::vector<CMat> anticommutators;  // basis[a] basis[b] + basis[b] basis[a]
};

const ModelCache& model_cache(const LieAlgebraModel& alg) {
  static ModelCache su2c, su3c;
  ModelCache& c = (alg.name == lie::AlgebraName::su3) ? su3c : su2c;
  if (c.basis.empty()) {
    for (int a = 0; a < alg.dim; ++a)
      c.basis.push_back(lie::hermitian_model(alg, Vec::Unit(alg.dim, a)));
    for (int a = 0; a < alg.dim; ++a)
      for (int b = 0; b < alg.dim; ++b)
        c.anticommutators.push_back(c.basis[a] * c.basis[b] + c.basis[b] * c.basis[a]);
  }
  return c;
}

// Gradients of the Casimir constraints (columns), and their values.
struct OrbitConstraints {
  int n = 0;
  Vec target;
  Vec value(const LieAlgebraModel& alg, const Vec& xi) const { return lie::casimirs(alg, xi); }
  Mat gradients(const LieAlgebraModel& alg, const Vec& xi) const {
    const int d = alg.dim;
    if (alg.name != lie::AlgebraName::su3) {
      Mat G(d, 1);
      G.col(0) = 2.0 * xi;  // |xi|^2
      return G;
    }
    Mat G(d, 2);
    G.col(0) = 4.0 * xi;  // tr M^2 = 2 |xi|^2
    CMat M = lie::hermitian_model(alg, xi);
    CMat M2 = M * M;
    Vec m2 = lie::coords_from_model(alg, M2);  // tr(lambda_a M^2)/2
    G.col(1) = 6.0 * m2;                       // d tr M^3 / d xi
    return G;
  }
};

struct RefineResult {
  Vec xi;
  bool converged = false;
};

// Levenberg-Marquardt on the stationarity system
//   grad B(xi) - N(xi) * mult = 0,  casimirs(xi) = target,
// which characterizes critical points of B|_O exactly: the ambient
// gradient lies in the orbit normal span. Converges to saddles as well;
// a full Newton step is tried first once the residual is small (quadratic
// endgame).
RefineResult refine_critical(const LieAlgebraModel& alg, const QuadraticForm& B,
                             const Vec& mu_emb, const Vec& seed,
                             const MultistartConfig& cfg) {
  const int d = alg.dim;
  OrbitConstraints con;
  con.n = (alg.name == lie::AlgebraName::su3) ? 2 : 1;
  con.target = lie::casimirs(alg, mu_emb);
  const double bscale = std::max(1.0, B.matrix().operatorNorm() * mu_emb.squaredNorm());
  const double ftol = cfg.residual_tol * bscale;
  const ModelCache& cache = model_cache(alg);

  Vec xi = lie::project_to_orbit(alg, seed, mu_emb);
  Vec mult = Vec::Zero(con.n);
  {
    Mat N = con.gradients(alg, xi);
    mult = (N.transpose() * N).ldlt().solve(N.transpose() * B.gradient(xi));
  }

  auto residual = [&](const Vec& x, const Vec& m) {
    Vec F(d + con.n);
    Mat N = con.gradients(alg, x);
    F.head(d) = B.gradient(x) - N * m;
    F.tail(con.n) = con.value(alg, x) - con.target;
    return F;
  };
  auto jacobian = [&](const Vec& x, const Vec& m) {
    Mat J = Mat::Zero(d + con.n, d + con.n);
    Mat N = con.gradients(alg, x);
    Mat H = 2.0 * B.matrix();
    double c2scale = (alg.name == lie::AlgebraName::su3) ? 4.0 : 2.0;
    H -= m(0) * c2scale * Mat::Identity(d, d);
    if (con.n == 2) {
      CMat M = lie::hermitian_model(alg, x);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          double j2 = 3.0 * (cache.anticommutators[a * d + b] * M).trace().real();
          H(a, b) -= m(1) * j2;
        }
    }
    J.topLeftCorner(d, d) = H;
    J.topRightCorner(d, con.n) = -N;
    J.bottomLeftCorner(con.n, d) = N.transpose();
    return J;
  };

  Vec F = residual(xi, mult);
  double lambda = 1e-3;
  for (int it = 0; it < cfg.max_newton_iter; ++it) {
    if (F.head(d).norm() <= ftol && F.tail(con.n).cwiseAbs().maxCoeff() <= ftol) {
      xi = lie::project_to_orbit(alg, xi, mu_emb);
      return {xi, true};
    }
    Mat J = jacobian(xi, mult);

    // quadratic endgame: try the plain Newton step when already close
    if (F.norm() <= 1e-3 * bscale) {
      Vec step = Eigen::PartialPivLU<Mat>(J).solve(-F);
      if (step.allFinite()) {
        Vec xin = xi + step.head(d);
        Vec multn = mult + step.tail(con.n);
        Vec Fn = residual(xin, multn);
        if (Fn.allFinite() && Fn.norm() <= 0.5 * F.norm() + ftol) {
          xi = xin;
          mult = multn;
          F = Fn;
          continue;
        }
      }
    }

    Mat JtJ = J.transpose() * J;
    Vec JtF = J.transpose() * F;
    bool accepted = false;
    for (int tries = 0; tries < 50; ++tries) {
      Mat A = JtJ + lambda * Mat::Identity(d + con.n, d + con.n);
      Vec step = A.ldlt().solve(-JtF);
      Vec xin = xi + step.head(d);
      Vec multn = mult + step.tail(con.n);
      Vec Fn = residual(xin, multn);
      if (Fn.allFinite() && Fn.norm() < F.norm()) {
        xi = xin;
        mult = multn;
        F = Fn;
        lambda = std::max(lambda / 3.0, 1e-14);
        accepted = true;
        break;
      }
      lambda *= 3.0;
      if (lambda > 1e16) break;
    }
    if (!accepted) return {lie::project_to_orbit(alg, xi, mu_emb), false};
  }
  bool done = F.head(d).norm() <= ftol && F.tail(con.n).cwiseAbs().maxCoeff() <= ftol;
  return {lie::project_to_orbit(alg, xi, mu_emb), done};
}

// Orthonormal tangent frame at xi (columns), dimension = dim O.
Mat tangent_frame(const LieAlgebraModel& alg, const Vec& xi, int k) {
  Mat T = lie::orbit_tangent_span(alg, xi);
  Eigen::JacobiSVD<Mat> svd(T, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(k);
}

// Orbit Hessian spectrum by second differences through the isospectral
// retraction; Richardson-extrapolated once.
Vec orbit_hessian_eigs(const LieAlgebraModel& alg, const QuadraticForm& B, const Vec& xi,
                       const Vec& mu_emb, int k, double fd_step) {
  if (k == 0) return Vec();
  Mat Q = tangent_frame(alg, xi, k);
  auto feval = [&](const Vec& u) {
    return B(lie::project_to_orbit(alg, xi + Q * u, mu_emb));
  };
  const double f0 = feval(Vec::Zero(k));
  auto hess_at = [&](double h) {
    Mat H(k, k);
    for (int i = 0; i < k; ++i) {
      Vec ei = Vec::Unit(k, i) * h;
      H(i, i) = (feval(ei) - 2 * f0 + feval(-ei)) / (h * h);
      for (int j = i + 1; j < k; ++j) {
        Vec ej = Vec::Unit(k, j) * h;
        double v = (feval(ei + ej) - feval(ei - ej) - feval(-ei + ej) + feval(-ei - ej)) /
                   (4 * h * h);
        H(i, j) = H(j, i) = v;
      }
    }
    return H;
  };
  const double h = fd_step * std::max(1.0, mu_emb.norm());
  Mat H = (4.0 * hess_at(0.5 * h) - hess_at(h)) / 3.0;
  H = 0.5 * (H + H.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i) - 1e-12) return true;
    if (a(i) > b(i) + 1e-12) return false;
  }
  return false;
}

}  // namespace

CriticalSet critical_points(const LieAlgebraModel& alg, const QuadraticForm& B,
                            const WeylChamberPoint& mu, const MultistartConfig& cfg) {
  if (cfg.seeds < 1) throw std::invalid_argument("critical_points: cfg.seeds >= 1 required");
  Vec mu_emb = lie::embed_chamber(alg, mu);
  const int k = lie::orbit_dim(alg, mu);
  CriticalSet out;
  out.orbit_dim = k;

  if (k == 0) {
    CriticalPointRecord rec;
    rec.point = mu_emb;
    rec.value = B(mu_emb);
    rec.morse_index = 0;
    rec.nondegenerate = true;
    rec.min_abs_hessian_eig = rec.max_abs_hessian_eig = 0.0;
    out.records.push_back(rec);
    out.saturated = true;
    return out;
  }

  struct Found {
    Vec xi;
    bool converged;
    int first_seed;
  };
  std::vector<Found> found;
  auto rng = num::rng_stream(cfg.seed, 0);
  for (int s = 0; s < cfg.seeds; ++s) {
    // a stalled Levenberg run is a bad seed, not evidence; retry a few
    // fresh orbit points before recording the failure
    RefineResult rr;
    for (int attempt = 0; attempt < 4; ++attempt) {
      Vec seed_pt = lie::random_orbit_point(alg, mu_emb, rng);
      rr = refine_critical(alg, B, mu_emb, seed_pt, cfg);
      if (rr.converged) break;
    }
    if (!rr.converged) {
      // flagged, not silently dropped
      found.push_back({rr.xi, false, s});
      continue;
    }
    bool dup = false;
    for (auto& f : found)
      if (f.converged && (f.xi - rr.xi).norm() <= cfg.dedup_tol * std::max(1.0, mu_emb.norm())) {
        dup = true;
        break;
      }
    if (!dup) found.push_back({rr.xi, true, s});
  }

  int last_new = 0;
  for (auto& f : found)
    if (f.converged) last_new = std::max(last_new, f.first_seed);
  out.saturated = last_new < cfg.seeds / 2;

  const double bnorm = B.matrix().operatorNorm();
  for (auto& f : found) {
    CriticalPointRecord rec;
    rec.point = f.xi;
    rec.value = B(f.xi);
    rec.converged = f.converged;
    rec.hessian_eigs = orbit_hessian_eigs(alg, B, f.xi, mu_emb, k, cfg.fd_step);
    double maxabs = rec.hessian_eigs.size() ? rec.hessian_eigs.cwiseAbs().maxCoeff() : 0.0;
    double minabs = rec.hessian_eigs.size() ? rec.hessian_eigs.cwiseAbs().minCoeff() : 0.0;
    rec.max_abs_hessian_eig = maxabs;
    rec.min_abs_hessian_eig = minabs;
    // absolute floor at the form's scale keeps FD noise on constant
    // restrictions from passing as nondegeneracy
    rec.nondegenerate = f.converged && minabs > cfg.hessian_tol_rel * std::max(maxabs, bnorm);
    if (rec.nondegenerate) {
      int neg = 0;
      for (int i = 0; i < rec.hessian_eigs.size(); ++i)
        if (rec.hessian_eigs(i) < 0.0) ++neg;
      rec.morse_index = neg;
    }
    out.records.push_back(std::move(rec));
  }

  // tolerant value comparison: antipodal mates share a critical value up
  // to roundoff, and the tie must break the same way on every run
  double vscale = 1.0;
  for (auto& r : out.records) vscale = std::max(vscale, std::abs(r.value));
  const double vtol = 1e-9 * vscale;
  std::sort(out.records.begin(), out.records.end(),
            [vtol](const CriticalPointRecord& a, const CriticalPointRecord& b) {
              if (std::abs(a.value - b.value) > vtol) return a.value < b.value;
              return lex_less(a.point, b.point);
            });
  return out;
}

MorseReport is_morse(const LieAlgebraModel& alg, const QuadraticForm& B,
                     const WeylChamberPoint& mu, const MultistartConfig& cfg) {
  MorseReport rep;
  rep.critical = critical_points(alg, B, mu, cfg);
  // verdict over the converged records; unconverged iterates are flagged
  // evidence of refinement trouble, not of a degenerate critical point
  int n_conv = 0;
  rep.is_morse = true;
  for (auto& r : rep.critical.records) {
    if (!r.converged) {
      ++rep.n_unconverged;
      continue;
    }
    ++n_conv;
    if (!r.nondegenerate) rep.is_morse = false;
  }
  if (n_conv == 0) rep.is_morse = false;

  // Distinct critical values, read up to the central +/- symmetry of
  // quadratic forms: a shared value is tolerated only between antipodal
  // points (which are unavoidable on su(2) orbits).
  const auto& rs = rep.critical.records;
  double vscale = 1.0;
  for (auto& r : rs) vscale = std::max(vscale, std::abs(r.value));
  const double vtol = cfg.value_tol_rel * vscale;
  const double ptol = 10.0 * cfg.dedup_tol * std::max(1.0, rs.empty() ? 1.0 : rs[0].point.norm());
  rep.distinct_values = true;
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (!rs[i].converged || !rs[j].converged) continue;
      if (std::abs(rs[i].value - rs[j].value) <= vtol &&
          (rs[i].point + rs[j].point).norm() > ptol)
        rep.distinct_values = false;
    }
  return rep;
}

GenericityReport genericity_sample(const LieAlgebraModel& alg, int n_forms,
                                   const std::vector<WeylChamberPoint>& orbit_mus,
                                   std::uint64_t seed, bool inject_controls,
                                   const MultistartConfig& cfg) {
  if (n_forms < 1) throw std::invalid_argument("genericity_sample: n_forms >= 1 required");
  if (orbit_mus.empty()) throw std::invalid_argument("genericity_sample: need orbits");
  const int d = alg.dim;
  const int n_orbits = static_cast<int>(orbit_mus.size());

  std::vector<Mat> forms(n_forms);
  for (int f = 0; f < n_forms; ++f) {
    auto rng = num::rng_stream(seed, static_cast<std::uint64_t>(f) + 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat A(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A(i, j) = gauss(rng);
    forms[f] = A.transpose() * A + 1e-6 * Mat::Identity(d, d);
  }

  const std::size_t n_pairs = static_cast<std::size_t>(n_forms) * n_orbits;
  std::vector<MorseReport> reports(n_pairs);
  num::parallel_for(n_pairs, [&](std::size_t idx) {
    int f = static_cast<int>(idx) / n_orbits;
    int o = static_cast<int>(idx) % n_orbits;
    MultistartConfig c = cfg;
    c.seed = seed * 1000003ull + idx;
    reports[idx] = is_morse(alg, QuadraticForm(forms[f]), orbit_mus[o], c);
  });

  GenericityReport rep;
  rep.n_forms = n_forms;
  rep.n_orbits = n_orbits;
  int morse_count = 0;
  for (std::size_t idx = 0; idx < n_pairs; ++idx) {
    const auto& r = reports[idx];
    if (!r.critical.saturated) rep.all_saturated = false;
    // mass refinement failure would make the verdict vacuous; count it
    // as a failed pair rather than silently trusting the survivors
    bool quality = r.n_unconverged <= cfg.seeds / 2;
    if (r.is_morse && quality) {
      ++morse_count;
    } else {
      int f = static_cast<int>(idx) / n_orbits;
      int o = static_cast<int>(idx) % n_orbits;
      rep.failures.push_back({f, "random", orbit_mus[o].mu, r.is_morse, r.distinct_values});
    }
  }
  rep.fraction_morse = static_cast<double>(morse_count) / static_cast<double>(n_pairs);

  if (inject_controls) {
    rep.controls_flagged = true;
    QuadraticForm identity(Mat::Identity(d, d));
    for (int o = 0; o < n_orbits; ++o) {
      MultistartConfig c = cfg;
      c.seed = seed * 2000003ull + o;
      MorseReport r = is_morse(alg, identity, orbit_mus[o], c);
      if (r.is_morse) rep.controls_flagged = false;  // control escaped detection
      rep.failures.push_back({-1, "control:identity", orbit_mus[o].mu, r.is_morse,
                              r.distinct_values});
    }
  }
  return rep;
}

}  // namespace morse
}  // namespace legendrix
