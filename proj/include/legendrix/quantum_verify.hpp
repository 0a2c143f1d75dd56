#ifndef LEGENDRIX_QUANTUM_VERIFY_HPP
#define LEGENDRIX_QUANTUM_VERIFY_HPP

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "legendrix/numerics.hpp"

namespace legendrix {
namespace quantum {

/// Desk-scale quantum validation on the rotating sphere: weight-space
/// Schroedinger eigensolvers verifying inf spec -> F(mu), and the leading
/// Weyl term against the reduced phase-space volume.
///
/// The operator hbar^2 Delta + V on S^2 restricted to the e^{i m phi}
/// Fourier sector is the radial Sturm-Liouville problem
///   -hbar^2 (1/sin)(sin u')' + [hbar^2 m^2/sin^2 + V] u
/// on (0, pi) with measure sin(theta) dtheta. For m >= 1 it is symmetrized
/// by u = psi sqrt(sin): the flat-measure potential picks up
/// hbar^2 [(m^2 - 1/4)/sin^2 - 1/4], with Dirichlet decay at the poles.
/// For m = 0 that substitution is singular at the poles; a cell-centered
/// conservative scheme with natural Neumann closure (the sin(theta) flux
/// vanishes at the poles) is used instead, symmetrized by the discrete
/// measure.
///
/// Phase-volume normalization: Liouville measure dtheta dp on
/// {p^2 + mu^2/sin^2 + V <= E}, leading count = volume / (2 pi hbar);
/// calibrated once against the exact V = 0 count (volume 2 pi (sqrt E - mu)).

using Potential = std::function<double(double)>;

struct WeightSpaceProblem {
  double mu = 1.0;    // > 0
  int k = 20;         // hbar = 1/k
  int grid_n = 400;   // >= 200
  Potential v;        // V(theta)

  double hbar() const { return 1.0 / k; }
  int weight() const { return static_cast<int>(std::lround(mu * k)); }
};

/// Validates the invariants: mu > 0, grid_n >= 200, |m hbar - mu| <= hbar/2.
void validate(const WeightSpaceProblem& prob);

struct SymTridiag {
  Vec diag;
  Vec offdiag;  // size n-1
  std::vector<double> theta;
  std::string discretization;  // scheme note
};

/// Symmetric tridiagonal discretization of the weight-space operator;
/// symmetric by construction (a single array represents both off-diagonals).
SymTridiag weight_operator(const WeightSpaceProblem& prob);

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending
  int grid_n = 0;
  std::string note;  // discretization order
};

/// Full spectrum by implicit-shift tridiagonal iteration.
EigenResult solve_spectrum(const SymTridiag& op);

/// Lowest eigenvalue, Richardson-extrapolated over (n, 2n, 4n) when
/// requested (the scheme is order 2; the triplet removes the h^2 term).
double ground_energy(const WeightSpaceProblem& prob, bool richardson = true);

struct ScanRow {
  int k = 0;
  double hbar = 0.0;
  double lambda_min = 0.0;
  double gap = 0.0;  // lambda_min - F_ref
};

struct ScanResult {
  std::vector<ScanRow> rows;
  double loglog_slope = 0.0;  // of gap against hbar
};

/// lambda_min(k) along an increasing k ladder, with the log-log fit of
/// lambda_min - F_ref against hbar.
ScanResult ground_energy_scan(const Potential& v, double mu, const std::vector<int>& k_list,
                              double f_ref, int base_grid_n = 400, bool richardson = true);

/// Reduced phase-space volume of {p^2 + mu^2/sin^2 theta + V <= E}
/// (indicator fast path: analytic p-integral + composite Simpson in theta).
double reduced_phase_volume(const Potential& v, double mu, double energy,
                            int quadrature_n = 20001);

/// Generic bounded f: tensor quadrature of f(p^2 + W + V) over
/// (0,pi) x [-p_max, p_max]. Throws if f does not vanish at the p cutoff
/// (non-integrable on the unbounded fiber).
double reduced_phase_volume(const Potential& v, double mu,
                            const std::function<double(double)>& f, double p_max,
                            int quadrature_n = 2001);

struct WeylCount {
  long quantum = 0;
  double classical = 0.0;
  double rel_error = 0.0;
};

/// #{eigenvalues <= E in the weight-mu sector} against
/// (2 pi hbar)^-1 * reduced phase volume.
WeylCount weyl_count(const Potential& v, double mu, double hbar, double energy,
                     int grid_n = 0);

}  // namespace quantum
}  // namespace legendrix

#endif
