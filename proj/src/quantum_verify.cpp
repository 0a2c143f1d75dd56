#include "legendrix/quantum_verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace legendrix {
namespace quantum {

void validate(const WeightSpaceProblem& prob) {
  if (!(prob.mu > 0)) throw std::invalid_argument("weight space: mu > 0 required");
  if (prob.k < 1) throw std::invalid_argument("weight space: k >= 1 required");
  if (prob.grid_n < 200) throw std::invalid_argument("weight space: grid_n >= 200 required");
  double mh = prob.weight() * prob.hbar();
  if (std::abs(mh - prob.mu) > 0.5 * prob.hbar() + 1e-12)
    throw std::invalid_argument("weight space: |m hbar - mu| <= hbar/2 violated");
}

SymTridiag weight_operator(const WeightSpaceProblem& prob) {
  validate(prob);
  const int n = prob.grid_n;
  const double hb = prob.hbar();
  const double hb2 = hb * hb;
  const int m = prob.weight();
  SymTridiag op;
  op.diag.resize(n);
  op.offdiag.resize(n - 1);
  op.theta.resize(n);

  if (m >= 1) {
    // Liouville form, interior nodes, Dirichlet at the poles.
    const double h = M_PI / (n + 1);
    for (int i = 0; i < n; ++i) {
      double th = (i + 1) * h;
      op.theta[i] = th;
      double s = std::sin(th);
      op.diag(i) = 2.0 * hb2 / (h * h) +
                   hb2 * ((m * m - 0.25) / (s * s) - 0.25) + prob.v(th);
    }
    for (int i = 0; i + 1 < n; ++i) op.offdiag(i) = -hb2 / (h * h);
    op.discretization = "liouville-dirichlet order 2";
  } else {
    // m = 0: cell-centered conservative scheme; sin(theta) vanishes at the
    // poles so the boundary fluxes drop out (Neumann closure), then
    // symmetrize with the discrete measure sin(theta_i) h.
    const double h = M_PI / n;
    std::vector<double> s_half(n + 1);
    for (int i = 0; i <= n; ++i) s_half[i] = std::sin(i * h);
    for (int i = 0; i < n; ++i) {
      double th = (i + 0.5) * h;
      op.theta[i] = th;
      double si = std::sin(th);
      op.diag(i) = hb2 * (s_half[i] + s_half[i + 1]) / (si * h * h) + prob.v(th);
    }
    for (int i = 0; i + 1 < n; ++i) {
      double si = std::sin((i + 0.5) * h), sj = std::sin((i + 1.5) * h);
      op.offdiag(i) = -hb2 * s_half[i + 1] / (h * h * std::sqrt(si * sj));
    }
    op.discretization = "cell-centered-neumann order 2";
  }
  return op;
}

EigenResult solve_spectrum(const SymTridiag& op) {
  Eigen::SelfAdjointEigenSolver<Mat> es;
  es.computeFromTridiagonal(op.diag, op.offdiag, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numerical_error("solve_spectrum: tridiagonal iteration failed");
  EigenResult r;
  r.grid_n = static_cast<int>(op.diag.size());
  r.note = op.discretization;
  r.eigenvalues.assign(es.eigenvalues().data(),
                       es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end());
  return r;
}

double ground_energy(const WeightSpaceProblem& prob, bool richardson) {
  auto lam = [&](int n) {
    WeightSpaceProblem p = prob;
    p.grid_n = n;
    return solve_spectrum(weight_operator(p)).eigenvalues.front();
  };
  double l1 = lam(prob.grid_n);
  if (!richardson) return l1;
  double l2 = lam(2 * prob.grid_n);
  double l4 = lam(4 * prob.grid_n);
  // order-2 scheme: two Richardson stages remove h^2 and h^4
  double a = (4.0 * l2 - l1) / 3.0;
  double b = (4.0 * l4 - l2) / 3.0;
  return (16.0 * b - a) / 15.0;
}

ScanResult ground_energy_scan(const Potential& v, double mu, const std::vector<int>& k_list,
                              double f_ref, int base_grid_n, bool richardson) {
  for (std::size_t i = 1; i < k_list.size(); ++i)
    if (k_list[i] <= k_list[i - 1])
      throw std::invalid_argument("ground_energy_scan: k_list must increase");
  ScanResult out;
  out.rows.resize(k_list.size());
  num::parallel_for(k_list.size(), [&](std::size_t i) {
    WeightSpaceProblem prob{mu, k_list[i], base_grid_n, v};
    ScanRow row;
    row.k = k_list[i];
    row.hbar = prob.hbar();
    row.lambda_min = ground_energy(prob, richardson);
    row.gap = row.lambda_min - f_ref;
    out.rows[i] = row;
  });
  std::vector<double> hs, gaps;
  for (auto& r : out.rows)
    if (r.gap > 0) {
      hs.push_back(r.hbar);
      gaps.push_back(r.gap);
    }
  out.loglog_slope = (hs.size() >= 2) ? num::loglog_slope(hs, gaps) : 0.0;
  return out;
}

double reduced_phase_volume(const Potential& v, double mu, double energy, int quadrature_n) {
  if (quadrature_n < 3) throw std::invalid_argument("reduced_phase_volume: quadrature_n too small");
  int n = quadrature_n | 1;  // Simpson needs odd
  // inner p-integral of the indicator is 2 sqrt(E - W - V)^+
  auto integrand = [&](double th) {
    double s = std::sin(th);
    double rest = energy - mu * mu / (s * s) - v(th);
    return rest > 0.0 ? 2.0 * std::sqrt(rest) : 0.0;
  };
  const double h = M_PI / (n - 1);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    double th = i * h;
    // endpoints th = 0, pi: integrand vanishes (W -> infinity)
    acc += w * ((i == 0 || i == n - 1) ? 0.0 : integrand(th));
  }
  return acc * h / 3.0;
}

double reduced_phase_volume(const Potential& v, double mu,
                            const std::function<double(double)>& f, double p_max,
                            int quadrature_n) {
  if (!(p_max > 0)) throw std::invalid_argument("reduced_phase_volume: p_max > 0 required");
  int n = quadrature_n | 1;
  const double hth = M_PI / (n - 1);
  const double hp = 2.0 * p_max / (n - 1);
  // reject f that has not decayed at the p cutoff (the fiber is unbounded)
  {
    double edge = 0.0;
    for (int i = 1; i + 1 < n; i += std::max(1, n / 32)) {
      double th = i * hth, s = std::sin(th);
      edge = std::max(edge, std::abs(f(p_max * p_max + mu * mu / (s * s) + v(th))));
    }
    if (edge > 1e-8)
      throw std::invalid_argument("reduced_phase_volume: f not negligible at the p cutoff "
                                  "(non-integrable)");
  }
  double acc = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    double th = i * hth, s = std::sin(th);
    double wth = (i % 2 ? 4.0 : 2.0);
    double weff = mu * mu / (s * s) + v(th);
    double inner = 0.0;
    for (int j = 0; j < n; ++j) {
      double p = -p_max + j * hp;
      double wp = (j == 0 || j == n - 1) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      inner += wp * f(p * p + weff);
    }
    acc += wth * inner * hp / 3.0;
  }
  return acc * hth / 3.0;
}

WeylCount weyl_count(const Potential& v, double mu, double hbar, double energy, int grid_n) {
  int k = static_cast<int>(std::lround(1.0 / hbar));
  if (std::abs(1.0 / k - hbar) > 1e-12)
    throw std::invalid_argument("weyl_count: hbar must be 1/k, k a positive integer");
  if (grid_n == 0) grid_n = std::max(800, 32 * k);  // resolve oscillations up to E
  WeightSpaceProblem prob{mu, k, grid_n, v};
  EigenResult res = solve_spectrum(weight_operator(prob));
  WeylCount out;
  for (double lam : res.eigenvalues)
    if (lam <= energy) ++out.quantum;
  out.classical = reduced_phase_volume(v, mu, energy) / (2.0 * M_PI * hbar);
  out.rel_error = (out.classical != 0.0)
                      ? std::abs(out.quantum - out.classical) / std::abs(out.classical)
                      : (out.quantum == 0 ? 0.0 : std::numeric_limits<double>::infinity());
  return out;
}

}  // namespace quantum
}  // namespace legendrix
