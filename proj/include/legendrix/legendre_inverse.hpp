#ifndef LEGENDRIX_LEGENDRE_INVERSE_HPP
#define LEGENDRIX_LEGENDRE_INVERSE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "legendrix/forward_map.hpp"

namespace legendrix {
namespace inverse {

/// Recovery of the reduced potential from the spectral invariant F via
/// the one-dimensional generalized Legendre relations
///   (value)       V(f(mu)) = F(mu) - mu^2 w(f(mu))
///   (derivative)  V'(f(mu)) = -mu^2 w'(f(mu))
///   (momentum)    F'(mu) = 2 mu w(f(mu))  -> locates f(mu) by inverting w,
/// with mandatory branch detection on the monotone windows of w.

/// 1-D reduced geometry: the kinetic profile w(z) with W(z, mu) = mu^2 w(z).
struct Geometry1D {
  std::string model;
  double z_lo = 0.0, z_hi = 0.0;
  std::function<double(double)> w;
  std::function<double(double)> wprime;  // analytic when available
};

/// Built from a model: w = reduction::kinetic_profile, w' by central
/// differences with Richardson (the shipped models have smooth profiles).
Geometry1D reduced_geometry(const reduction::ModelManifold& model);

struct InvertOptions {
  double route_tol = 1e-4;       // value- vs derivative-route agreement
  double wprime_tol = 1e-8;      // |w'| below this is ill-conditioned
  int trim_cells = 2;            // drop mu-grid ends touched by one-sided stencils
  int profile_samples = 4096;    // dense w sampling for window detection/inversion
  // Optional branch hint: restrict window detection to [lo, hi] in z.
  std::optional<std::pair<double, double>> window_hint;
};

struct BranchWindow {
  double z_lo = 0.0, z_hi = 0.0;
  int direction = 0;  // sign of w' on the window
  bool covers_targets = false;
};

struct BranchReport {
  bool injective = false;
  int direction = 0;                  // monotone direction of mu -> f(mu)
  std::vector<BranchWindow> windows;  // detected monotone windows of w
  int chosen = -1;
};

struct ReconstructionResult {
  std::vector<double> z_grid;   // visited window f(U0), sorted ascending
  std::vector<double> v_hat;    // value-route potential on z_grid
  std::vector<double> mu_of_z;  // the mu sample that produced each node
  std::pair<double, double> window{0.0, 0.0};
  BranchReport branch_report;
  double residual_stationarity = 0.0;  // max |mu^2 w'(f) + V'(f)|
  double residual_momentum = 0.0;      // max |2 mu w(f) - F'(mu)|
  double route_disagreement = 0.0;     // value route vs integrated derivative route
  bool valid = false;
  std::optional<double> comparison_sup_error;  // vs ground truth when given
};

/// Errors: branch ambiguity / non-injective f -> numerical_error carrying
/// the branch map; |w'| < tol on the window -> ill-conditioned error;
/// route disagreement > route_tol -> numerical_error with the residual.
ReconstructionResult invert_1d(const forward::SpectralCurve& curve, const Geometry1D& geom,
                               const InvertOptions& opts,
                               const std::function<double(double)>* ground_truth = nullptr);

/// Derivative route alone (up to an additive constant); used by the
/// additive-constant contract tests.
std::vector<double> derivative_route(const ReconstructionResult& rec, const Geometry1D& geom);

struct RelationResiduals {
  double stationarity = 0.0;  // (3.8.1)-type: fiber stationarity at f(mu)
  double momentum = 0.0;      // (3.8.2)-type: dF/dmu = dW/dmu at f(mu)
};

/// Evaluates both Legendre identities at every (f(mu), mu) pair of a
/// reconstruction; the numerical witness that the composed canonical
/// relation maps graph(dF) onto graph(-dV).
RelationResiduals relation_residuals(const forward::SpectralCurve& curve,
                                     const Geometry1D& geom,
                                     const ReconstructionResult& rec);

/// 4th-order finite-difference derivative of F along the mu grid
/// (one-sided at the ends). Throws if the grid has fewer than 5 points.
std::vector<double> curve_derivative(const forward::SpectralCurve& curve);
std::vector<double> curve_derivative(const std::vector<double>& mu,
                                     const std::vector<double>& F);

struct KillingVerdict {
  Mat mixed_partial;        // (d/dz)(d/dmu) rho on the grid
  std::vector<std::vector<bool>> nondegenerate;
  bool all_nondegenerate = false;
  bool all_degenerate = false;
};

/// Non-degeneracy of the mixed-partial matrix for a Killing-type fiber
/// metric rho(z, mu) C_mu, on a rectangular grid (dim t* = 1 shipped:
/// the matrix is 1x1). Central differences, step from the grid spacing.
KillingVerdict killing_nondegeneracy(const std::function<double(double, double)>& rho,
                                     const std::vector<double>& z_grid,
                                     const std::vector<double>& mu_grid, double tol = 1e-8);

/// Interface for the general n-dimensional inversion (Newton on the
/// coupled relations when the mixed-partial matrix is invertible); the
/// 1-D pipeline above is the only shipped instance.
class PotentialInverter {
public:
  virtual ~PotentialInverter() = default;
  virtual ReconstructionResult invert(const forward::SpectralCurve& curve) = 0;
};

class Inverter1D final : public PotentialInverter {
public:
  Inverter1D(Geometry1D geom, InvertOptions opts) : geom_(std::move(geom)), opts_(opts) {}
  ReconstructionResult invert(const forward::SpectralCurve& curve) override {
    return invert_1d(curve, geom_, opts_);
  }

private:
  Geometry1D geom_;
  InvertOptions opts_;
};

}  // namespace inverse
}  // namespace legendrix

#endif
