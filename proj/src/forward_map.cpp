#include "legendrix/forward_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace legendrix {
namespace forward {

using reduction::ModelManifold;

std::function<double(const Vec&)> effective_potential_chart(const ModelManifold& model,
                                                            const ScalarPotential& v_red,
                                                            double mu) {
  const auto* m = &model;
  lie::WeylChamberPoint muc = lie::make_chamber_point(model.algebra(), mu);
  Vec mu_emb = lie::embed_chamber(model.algebra(), muc);
  return [m, v_red, mu_emb](const Vec& p) {
    if (!m->in_chart(p)) throw std::invalid_argument("effective potential: outside chart");
    return reduction::effective_w(*m, p, mu_emb) + v_red(m->quotient_z(p));
  };
}

std::function<double(double)> effective_potential_z(const ModelManifold& model,
                                                    const ScalarPotential& v_red, double mu) {
  const auto* m = &model;
  const double mu2 = mu * mu;
  return [m, v_red, mu2](double z) {
    return mu2 * reduction::kinetic_profile(*m, z) + v_red(z);
  };
}

MinimizeResult minimize_F(const ModelManifold& model, const ScalarPotential& v_red,
                          double mu, const MinimizeConfig& cfg) {
  if (cfg.multistart < 1) throw std::invalid_argument("minimize_F: multistart >= 1 required");
  lie::make_chamber_point(model.algebra(), mu);  // strict interior check
  auto [lo, hi] = model.z_window();
  if (cfg.window_lo < cfg.window_hi) {
    lo = cfg.window_lo;
    hi = cfg.window_hi;
  }
  const double span = hi - lo;
  auto h = effective_potential_z(model, v_red, mu);

  struct Cand {
    double x, value;
    bool boundary;
  };
  std::vector<Cand> cands;
  auto rng = num::rng_stream(cfg.seed, 0);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  const double xtol = cfg.xtol_rel * span;
  for (int j = 0; j < cfg.multistart; ++j) {
    double x0 = lo + (j + jitter(rng)) / cfg.multistart * span;
    auto lm = num::local_min_1d(h, lo, hi, x0, span / (4.0 * cfg.multistart), xtol);
    cands.push_back({lm.x, lm.value, lm.at_boundary});
  }

  // cluster the refined minima
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.x < b.x; });
  std::vector<Cand> minima;
  const double cluster_tol = std::max(1e-7 * span, 4.0 * xtol);
  for (const auto& c : cands) {
    if (!minima.empty() && std::abs(c.x - minima.back().x) <= cluster_tol) {
      if (c.value < minima.back().value) minima.back() = c;
    } else {
      minima.push_back(c);
    }
  }
  if (minima.empty()) throw numerical_error("minimize_F: no converged minimum");

  MinimizeResult r;
  auto best = std::min_element(minima.begin(), minima.end(),
                               [](const Cand& a, const Cand& b) { return a.value < b.value; });
  r.F = best->value;
  r.f_min = best->x;
  r.n_local_minima = static_cast<int>(minima.size());
  double vscale = std::max(1.0, std::abs(r.F));
  int ties = 0;
  for (const auto& m : minima)
    if (m.value <= r.F + cfg.value_tie_tol * vscale) ++ties;
  r.boundary_escape = best->boundary;
  r.in_U = !best->boundary && (r.f_min - lo) > cfg.boundary_margin &&
           (hi - r.f_min) > cfg.boundary_margin;
  r.unique_min = (ties == 1) && r.in_U;

  // Z-level Hessian certificate (one-sided at a window edge)
  double step = std::max(1e-5 * span, 1e-7);
  auto second = [&](double hh) {
    double x = std::clamp(r.f_min, lo + hh, hi - hh);
    return (h(x + hh) - 2 * h(x) + h(x - hh)) / (hh * hh);
  };
  r.hess_min_eig = (4.0 * second(step / 2) - second(step)) / 3.0;

  if (model.algebra().name != lie::AlgebraName::circle) {
    auto prof = reduction::fiber_profile(model, r.f_min,
                                         lie::make_chamber_point(model.algebra(), mu));
    r.fiber_min_multiplicity = prof.min_multiplicity;
  }

  if (cfg.audit_points > 0) {
    auto arng = num::rng_stream(cfg.seed, 1);
    std::uniform_real_distribution<double> u(lo, hi);
    for (int i = 0; i < cfg.audit_points; ++i) {
      double y = u(arng);
      r.audit_max_violation = std::max(r.audit_max_violation, r.F - h(y));
    }
  }
  return r;
}

std::vector<double> SpectralCurve::mu_values() const {
  std::vector<double> v;
  v.reserve(points.size());
  for (auto& p : points) v.push_back(p.mu);
  return v;
}

std::vector<double> SpectralCurve::f_values() const {
  std::vector<double> v;
  v.reserve(points.size());
  for (auto& p : points) v.push_back(p.min.F);
  return v;
}

SpectralCurve spectral_curve(const ModelManifold& model, const ScalarPotential& v_red,
                             const std::vector<double>& mu_grid, const MinimizeConfig& cfg) {
  SpectralCurve curve;
  curve.model = model.name();
  curve.points.resize(mu_grid.size());
  num::parallel_for(mu_grid.size(), [&](std::size_t i) {
    SpectralPoint pt;
    pt.mu = mu_grid[i];
    try {
      MinimizeConfig c = cfg;
      c.seed = cfg.seed + 1000ull * i;
      pt.min = minimize_F(model, v_red, mu_grid[i], c);
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
    curve.points[i] = std::move(pt);
  });

  // jump detector on f_min over the unique_min subgrid
  auto [lo, hi] = model.z_window();
  if (cfg.window_lo < cfg.window_hi) {
    lo = cfg.window_lo;
    hi = cfg.window_hi;
  }
  const double span = hi - lo;
  std::vector<double> steps;
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const auto& a = curve.points[i];
    const auto& b = curve.points[i + 1];
    if (a.ok && b.ok && a.min.unique_min && b.min.unique_min)
      steps.push_back(std::abs(b.min.f_min - a.min.f_min));
  }
  double med = 0.0;
  if (!steps.empty()) {
    auto tmp = steps;
    std::nth_element(tmp.begin(), tmp.begin() + tmp.size() / 2, tmp.end());
    med = tmp[tmp.size() / 2];
  }
  const double jump_tol = std::max(5.0 * med, 1e-3 * span);
  int dir = 0;
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const auto& a = curve.points[i];
    const auto& b = curve.points[i + 1];
    if (!(a.ok && b.ok && a.min.unique_min && b.min.unique_min)) continue;
    double d = b.min.f_min - a.min.f_min;
    if (std::abs(d) > jump_tol) curve.jump_flags.push_back(static_cast<int>(i));
    int s = (d > 0) ? 1 : (d < 0 ? -1 : 0);
    if (s != 0) {
      if (dir == 0) dir = s;
      else if (dir != s) monotone = false;
    }
  }
  curve.f_monotone = monotone && dir != 0;
  curve.monotone_dir = dir;
  return curve;
}

ConditionIReport condition_I_report(const ModelManifold& model, double mu,
                                    const std::vector<double>& z_samples,
                                    const morse::MultistartConfig& cfg) {
  if (model.algebra().name == lie::AlgebraName::circle)
    throw std::invalid_argument("condition_I_report: needs a non-abelian model");
  ConditionIReport rep;
  rep.fibers.resize(z_samples.size());
  auto muc = lie::make_chamber_point(model.algebra(), mu);
  num::parallel_for(z_samples.size(), [&](std::size_t i) {
    auto prof = reduction::fiber_profile(model, z_samples[i], muc);
    morse::MultistartConfig c = cfg;
    c.seed = cfg.seed + 77ull * i;
    auto verdict = morse::is_morse(model.algebra(), prof.form, muc, c);
    FiberVerdict fv;
    fv.z = z_samples[i];
    fv.is_morse = verdict.is_morse;
    fv.distinct_values = verdict.distinct_values;
    fv.n_critical = static_cast<int>(verdict.critical.records.size());
    double m = std::numeric_limits<double>::infinity();
    for (auto& r : verdict.critical.records) m = std::min(m, r.min_abs_hessian_eig);
    fv.min_abs_hessian_eig = std::isfinite(m) ? m : 0.0;
    rep.fibers[i] = fv;
  });
  int cnt = 0;
  for (auto& f : rep.fibers)
    if (f.is_morse) ++cnt;
  rep.morse_fraction = rep.fibers.empty() ? 0.0 : double(cnt) / double(rep.fibers.size());
  return rep;
}

}  // namespace forward
}  // namespace legendrix
