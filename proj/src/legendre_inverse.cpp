#include "legendrix/legendre_inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace legendrix {
namespace inverse {

std::vector<double> curve_derivative(const std::vector<double>& mu,
                                     const std::vector<double>& F) {
  if (mu.size() < 5)
    throw std::invalid_argument("curve_derivative: grid too short (< 5 points)");
  return num::derivative_on_grid(mu, F, 1, 5);
}

std::vector<double> curve_derivative(const forward::SpectralCurve& curve) {
  std::vector<double> mu, F;
  for (auto& p : curve.points) {
    mu.push_back(p.mu);
    F.push_back(p.min.F);
  }
  return curve_derivative(mu, F);
}

Geometry1D reduced_geometry(const reduction::ModelManifold& model) {
  Geometry1D g;
  g.model = model.name();
  auto [lo, hi] = model.z_window();
  g.z_lo = lo;
  g.z_hi = hi;
  const auto* m = &model;
  g.w = [m](double z) { return reduction::kinetic_profile(*m, z); };
  g.wprime = [m](double z) {
    double h = 1e-5 * std::max(1.0, std::abs(z));
    auto d = [m, z](double hh) {
      return (reduction::kinetic_profile(*m, z + hh) -
              reduction::kinetic_profile(*m, z - hh)) / (2 * hh);
    };
    return (4.0 * d(h / 2) - d(h)) / 3.0;
  };
  return g;
}

namespace {

std::string describe_windows(const std::vector<BranchWindow>& ws) {
  std::ostringstream oss;
  for (const auto& w : ws)
    oss << " [" << w.z_lo << ", " << w.z_hi << "] dir=" << w.direction
        << (w.covers_targets ? " (covers targets)" : "");
  return oss.str();
}

}  // namespace

ReconstructionResult invert_1d(const forward::SpectralCurve& curve, const Geometry1D& geom,
                               const InvertOptions& opts,
                               const std::function<double(double)>* ground_truth) {
  const auto& pts = curve.points;
  if (pts.size() < 5) throw std::invalid_argument("invert_1d: need >= 5 mu samples");
  std::vector<double> mu, F;
  for (auto& p : pts) {
    mu.push_back(p.mu);
    F.push_back(p.min.F);
  }
  std::vector<double> Fp = curve_derivative(mu, F);

  // usable samples: converged unique interior minima, away from the
  // one-sided stencil contamination at the grid ends
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i < static_cast<std::size_t>(opts.trim_cells)) continue;
    if (i + opts.trim_cells >= pts.size()) continue;
    if (!pts[i].ok || !pts[i].min.unique_min) continue;
    idx.push_back(i);
  }
  if (idx.size() < 5)
    throw numerical_error("invert_1d: fewer than 5 usable samples (unique interior minima)");

  std::vector<double> targets;
  for (auto i : idx) targets.push_back(Fp[i] / (2.0 * mu[i]));

  // monotone windows of w on a dense sample
  double zlo = geom.z_lo, zhi = geom.z_hi;
  if (opts.window_hint) {
    zlo = std::max(zlo, opts.window_hint->first);
    zhi = std::min(zhi, opts.window_hint->second);
  }
  if (!(zlo < zhi)) throw std::invalid_argument("invert_1d: empty z window");
  const int n = opts.profile_samples;
  std::vector<double> zs(n), ws(n);
  for (int i = 0; i < n; ++i) {
    zs[i] = zlo + (zhi - zlo) * i / (n - 1);
    ws[i] = geom.w(zs[i]);
  }

  ReconstructionResult rec;
  auto& br = rec.branch_report;
  {
    int start = 0;
    int dir = 0;
    for (int i = 0; i + 1 < n; ++i) {
      int s = (ws[i + 1] > ws[i]) ? 1 : (ws[i + 1] < ws[i] ? -1 : 0);
      if (dir == 0) dir = s;
      if (s != 0 && s != dir) {
        br.windows.push_back({zs[start], zs[i], dir, false});
        start = i;
        dir = s;
      }
    }
    br.windows.push_back({zs[start], zs[n - 1], dir == 0 ? 1 : dir, false});
  }
  double tmin = *std::min_element(targets.begin(), targets.end());
  double tmax = *std::max_element(targets.begin(), targets.end());
  int n_candidates = 0;
  for (auto& w : br.windows) {
    double a = geom.w(w.z_lo), b = geom.w(w.z_hi);
    double lo = std::min(a, b), hi = std::max(a, b);
    double slack = 1e-9 * std::max(1.0, hi - lo);
    w.covers_targets = (tmin >= lo - slack) && (tmax <= hi + slack);
    if (w.covers_targets) ++n_candidates;
  }
  if (n_candidates == 0)
    throw numerical_error("invert_1d: no monotone window of w covers the targets "
                          "F'(mu)/(2 mu); windows:" + describe_windows(br.windows));
  if (n_candidates > 1)
    throw numerical_error("invert_1d: branch ambiguity, " + std::to_string(n_candidates) +
                          " monotone windows cover the targets (pass a window hint); "
                          "branch map:" + describe_windows(br.windows));
  for (std::size_t i = 0; i < br.windows.size(); ++i)
    if (br.windows[i].covers_targets) br.chosen = static_cast<int>(i);
  const BranchWindow& win = br.windows[br.chosen];

  // inverse interpolation z(w) on the window
  std::vector<double> wz, zz;
  for (int i = 0; i < n; ++i)
    if (zs[i] >= win.z_lo && zs[i] <= win.z_hi) {
      wz.push_back(ws[i]);
      zz.push_back(zs[i]);
    }
  if (win.direction < 0) {
    std::reverse(wz.begin(), wz.end());
    std::reverse(zz.begin(), zz.end());
  }
  // near a flat extremum consecutive w samples can collide in floating
  // point; keep the strictly increasing subsequence for the interpolant
  {
    std::size_t keep = 1;
    for (std::size_t i = 1; i < wz.size(); ++i)
      if (wz[i] > wz[keep - 1]) {
        wz[keep] = wz[i];
        zz[keep] = zz[i];
        ++keep;
      }
    wz.resize(keep);
    zz.resize(keep);
  }
  num::MonotoneCubic zofw(wz, zz);

  // degenerate window: constant targets mean f(mu) sits at one fiber (a
  // potential constant in z does this); collapse to a single-node result
  // instead of tripping the injectivity error
  if (tmax - tmin <= 1e-9 * std::max(1.0, std::abs(tmax))) {
    double f = zofw(0.5 * (tmin + tmax));
    double vsum = 0.0;
    for (auto i : idx) vsum += F[i] - mu[i] * mu[i] * geom.w(f);
    rec.z_grid = {f};
    rec.v_hat = {vsum / static_cast<double>(idx.size())};
    rec.mu_of_z = {mu[idx.front()]};
    rec.window = {f, f};
    br.injective = true;
    br.direction = 0;
    rec.valid = true;
    if (ground_truth) {
      double sup = 0.0;
      for (auto i : idx)
        sup = std::max(sup, std::abs((F[i] - mu[i] * mu[i] * geom.w(f)) - (*ground_truth)(f)));
      rec.comparison_sup_error = sup;
    }
    return rec;
  }

  struct Node {
    double z, mu, v;
  };
  std::vector<Node> nodes;
  for (std::size_t t = 0; t < idx.size(); ++t) {
    std::size_t i = idx[t];
    double f = zofw(targets[t]);
    double v = F[i] - mu[i] * mu[i] * geom.w(f);
    nodes.push_back({f, mu[i], v});
  }

  // ill-conditioning check where the inversion actually landed
  double min_abs_wp = std::numeric_limits<double>::infinity();
  for (const auto& nd : nodes) min_abs_wp = std::min(min_abs_wp, std::abs(geom.wprime(nd.z)));
  if (!(min_abs_wp > opts.wprime_tol))
    throw numerical_error("invert_1d: |w'| below tolerance on the recovered window "
                          "(ill-conditioned inversion)");

  // injectivity of mu -> f(mu)
  br.injective = true;
  int fdir = 0;
  for (std::size_t t = 0; t + 1 < nodes.size(); ++t) {
    double d = nodes[t + 1].z - nodes[t].z;
    int s = (d > 0) ? 1 : (d < 0 ? -1 : 0);
    if (s == 0) br.injective = false;
    if (s != 0) {
      if (fdir == 0) fdir = s;
      else if (s != fdir) br.injective = false;
    }
  }
  br.direction = fdir;
  if (!br.injective)
    throw numerical_error("invert_1d: mu -> f(mu) not injective on the data; branch map:" +
                          describe_windows(br.windows));

  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.z < b.z; });
  for (auto& nd : nodes) {
    rec.z_grid.push_back(nd.z);
    rec.v_hat.push_back(nd.v);
    rec.mu_of_z.push_back(nd.mu);
  }
  rec.window = {rec.z_grid.front(), rec.z_grid.back()};

  // derivative route: integrate V' = -mu^2 w' along z, pin the constant to
  // the value route, and demand agreement
  std::vector<double> vder = derivative_route(rec, geom);
  double c = 0.0;
  for (std::size_t j = 0; j < vder.size(); ++j) c += rec.v_hat[j] - vder[j];
  c /= static_cast<double>(vder.size());
  for (std::size_t j = 0; j < vder.size(); ++j)
    rec.route_disagreement = std::max(rec.route_disagreement,
                                      std::abs(rec.v_hat[j] - (vder[j] + c)));
  if (rec.route_disagreement > opts.route_tol)
    throw numerical_error("invert_1d: value/derivative route disagreement " +
                          std::to_string(rec.route_disagreement) + " exceeds route_tol " +
                          std::to_string(opts.route_tol));

  auto res = relation_residuals(curve, geom, rec);
  rec.residual_stationarity = res.stationarity;
  rec.residual_momentum = res.momentum;
  rec.valid = true;

  if (ground_truth) {
    double sup = 0.0;
    for (std::size_t j = 0; j < rec.z_grid.size(); ++j)
      sup = std::max(sup, std::abs(rec.v_hat[j] - (*ground_truth)(rec.z_grid[j])));
    rec.comparison_sup_error = sup;
  }
  return rec;
}

std::vector<double> derivative_route(const ReconstructionResult& rec, const Geometry1D& geom) {
  const auto& z = rec.z_grid;
  std::vector<double> v(z.size(), 0.0);
  auto slope = [&](std::size_t j) {
    double m = rec.mu_of_z[j];
    return -m * m * geom.wprime(z[j]);
  };
  for (std::size_t j = 1; j < z.size(); ++j)
    v[j] = v[j - 1] + 0.5 * (slope(j) + slope(j - 1)) * (z[j] - z[j - 1]);
  return v;
}

RelationResiduals relation_residuals(const forward::SpectralCurve& curve,
                                     const Geometry1D& geom,
                                     const ReconstructionResult& rec) {
  RelationResiduals out;
  if (rec.z_grid.size() < 5) throw std::invalid_argument("relation_residuals: window too short");
  std::vector<double> mu, F;
  for (auto& p : curve.points) {
    mu.push_back(p.mu);
    F.push_back(p.min.F);
  }
  std::vector<double> Fp = curve_derivative(mu, F);
  std::vector<double> vhat_prime = num::derivative_on_grid(rec.z_grid, rec.v_hat, 1, 5);

  for (std::size_t j = 0; j < rec.z_grid.size(); ++j) {
    double z = rec.z_grid[j];
    double m = rec.mu_of_z[j];
    double r1 = std::abs(m * m * geom.wprime(z) + vhat_prime[j]);
    out.stationarity = std::max(out.stationarity, r1);
    auto it = std::lower_bound(mu.begin(), mu.end(), m - 1e-12);
    if (it == mu.end() || std::abs(*it - m) > 1e-9)
      throw std::invalid_argument("relation_residuals: reconstruction mu not on the curve grid");
    double fp = Fp[static_cast<std::size_t>(it - mu.begin())];
    double r2 = std::abs(2.0 * m * geom.w(z) - fp);
    out.momentum = std::max(out.momentum, r2);
  }
  return out;
}

KillingVerdict killing_nondegeneracy(const std::function<double(double, double)>& rho,
                                     const std::vector<double>& z_grid,
                                     const std::vector<double>& mu_grid, double tol) {
  if (z_grid.size() < 2 || mu_grid.size() < 2)
    throw std::invalid_argument("killing_nondegeneracy: need a 2-d grid");
  KillingVerdict v;
  v.mixed_partial.resize(z_grid.size(), mu_grid.size());
  v.nondegenerate.assign(z_grid.size(), std::vector<bool>(mu_grid.size(), false));
  v.all_nondegenerate = true;
  v.all_degenerate = true;
  for (std::size_t i = 0; i < z_grid.size(); ++i)
    for (std::size_t j = 0; j < mu_grid.size(); ++j) {
      double z = z_grid[i], m = mu_grid[j];
      // cross stencil, Richardson once: the step must beat both the h^2
      // truncation and the eps/h^2 cancellation noise of smooth rho
      auto cross = [&](double hz, double hm) {
        return (rho(z + hz, m + hm) - rho(z + hz, m - hm) - rho(z - hz, m + hm) +
                rho(z - hz, m - hm)) / (4 * hz * hm);
      };
      double hz = 1e-3 * std::max(1.0, std::abs(z));
      double hm = 1e-3 * std::max(1.0, std::abs(m));
      double d = (4.0 * cross(0.5 * hz, 0.5 * hm) - cross(hz, hm)) / 3.0;
      v.mixed_partial(i, j) = d;
      bool nd = std::abs(d) > tol;
      v.nondegenerate[i][j] = nd;
      v.all_nondegenerate = v.all_nondegenerate && nd;
      v.all_degenerate = v.all_degenerate && !nd;
    }
  return v;
}

}  // namespace inverse
}  // namespace legendrix
