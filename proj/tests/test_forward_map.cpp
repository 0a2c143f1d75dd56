#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "legendrix/forward_map.hpp"
#include "legendrix/legendre_inverse.hpp"

using namespace legendrix;
using namespace legendrix::forward;

namespace {

double grid_scan(const std::function<double(double)>& h, double lo, double hi, int n) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) best = std::min(best, h(lo + (hi - lo) * i / (n - 1.0)));
  return best;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1.0);
  return v;
}

const ScalarPotential kZero = [](double) { return 0.0; };

}  // namespace

TEST_CASE("effective potential evaluators") {
  auto m = reduction::make_model("sphere_s1");
  auto chart = effective_potential_chart(*m, kZero, 1.0);
  Vec eq(2);
  eq << M_PI / 2, 0.0;
  CHECK(chart(eq) == doctest::Approx(1.0).epsilon(1e-12));
  Vec outside(2);
  outside << -0.2, 0.0;
  CHECK_THROWS_AS(chart(outside), std::invalid_argument);

  // a constant potential shifts the evaluator everywhere
  auto shifted = effective_potential_z(*m, [](double) { return 3.25; }, 1.0);
  auto plain = effective_potential_z(*m, kZero, 1.0);
  for (double z : {0.4, 1.0, 2.3})
    CHECK(shifted(z) - plain(z) == doctest::Approx(3.25).epsilon(1e-13));
}

TEST_CASE("minimize_F on the sphere: analytic and brute-force oracles") {
  auto m = reduction::make_model("sphere_s1");
  MinimizeConfig cfg;
  cfg.seed = 71;
  cfg.audit_points = 100;

  auto r = minimize_F(*m, kZero, 1.0, cfg);
  CHECK(r.F == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.f_min == doctest::Approx(M_PI / 2).epsilon(1e-6));
  CHECK(r.hess_min_eig > 0.0);
  CHECK(r.unique_min);
  CHECK(r.in_U);
  CHECK(r.audit_max_violation <= 1e-12);

  auto vcos = [](double th) { return std::cos(th); };
  auto [lo, hi] = m->z_window();
  for (double mu : {0.7, 1.0}) {
    auto rc = minimize_F(*m, vcos, mu, cfg);
    double scan = grid_scan(effective_potential_z(*m, vcos, mu), lo, hi, 1000000);
    CHECK(std::abs(rc.F - scan) <= 1e-8);
  }
  CHECK_THROWS_AS(minimize_F(*m, kZero, -1.0, cfg), std::invalid_argument);
}

TEST_CASE("homogeneity F(t mu) = t^2 F(mu) under V = 0") {
  MinimizeConfig cfg;
  cfg.seed = 72;
  for (const char* name : {"sphere_s1", "cp2_su2"}) {
    auto m = reduction::make_model(name);
    auto r1 = minimize_F(*m, kZero, 0.5, cfg);
    auto r2 = minimize_F(*m, kZero, 1.0, cfg);
    CHECK(r2.F == doctest::Approx(4.0 * r1.F).epsilon(1e-10));
  }
}

TEST_CASE("cp2 with V = 0: quadratic scaling with boundary escape flagged") {
  auto m = reduction::make_model("cp2_su2");
  MinimizeConfig cfg;
  cfg.seed = 73;
  std::vector<double> ratios;
  for (double mu : linspace(0.4, 1.2, 9)) {
    auto r = minimize_F(*m, kZero, mu, cfg);
    ratios.push_back(r.F / (mu * mu));
    CHECK(r.boundary_escape);
    CHECK_FALSE(r.in_U);
    CHECK(r.fiber_min_multiplicity == 2);  // round FS: degenerate minimum circle
  }
  double spread = *std::max_element(ratios.begin(), ratios.end()) -
                  *std::min_element(ratios.begin(), ratios.end());
  CHECK(spread / ratios.front() <= 1e-6);
}

TEST_CASE("bounded potential perturbs F boundedly") {
  auto m = reduction::make_model("sphere_s1");
  MinimizeConfig cfg;
  cfg.seed = 74;
  auto vb = [](double th) { return 0.4 * std::sin(3 * th); };
  for (double mu : linspace(0.5, 1.5, 7)) {
    double f0 = minimize_F(*m, kZero, mu, cfg).F;
    double fv = minimize_F(*m, vb, mu, cfg).F;
    CHECK(std::abs(fv - f0) <= 0.4 + 1e-10);
  }
}

TEST_CASE("stationarity and momentum identities hold at the reported minima") {
  auto m = reduction::make_model("sphere_s1");
  auto vcos = [](double th) { return std::cos(th); };
  MinimizeConfig cfg;
  cfg.seed = 75;
  auto grid = linspace(0.6, 1.4, 101);
  auto curve = spectral_curve(*m, vcos, grid, cfg);
  auto geom = inverse::reduced_geometry(*m);
  auto fprime = inverse::curve_derivative(curve);
  auto h = [&](double z, double mu) {
    return mu * mu * geom.w(z) + std::cos(z);
  };
  for (std::size_t i = 2; i + 2 < grid.size(); ++i) {
    const auto& p = curve.points[i];
    REQUIRE(p.ok);
    REQUIRE(p.min.unique_min);
    // d/dz (W + V) = 0 at f(mu)
    const double dz = 1e-5;
    double slope = (h(p.min.f_min + dz, p.mu) - h(p.min.f_min - dz, p.mu)) / (2 * dz);
    CHECK(std::abs(slope) < 1e-5);
    // dW/dmu (f(mu), mu) = F'(mu)
    CHECK(std::abs(2 * p.mu * geom.w(p.min.f_min) - fprime[i]) < 1e-5);
  }
}

TEST_CASE("spectral_curve diagnostics: monotone minimizer, no jumps") {
  auto m = reduction::make_model("sphere_s1");
  MinimizeConfig cfg;
  cfg.seed = 76;
  auto v = [](double th) { return 1.0 + 0.5 * th; };
  auto curve = spectral_curve(*m, v, linspace(0.4, 1.2, 60), cfg);
  CHECK(curve.jump_flags.empty());
  CHECK(curve.f_monotone);
  CHECK(curve.monotone_dir == 1);  // kinetic pull toward the equator grows with mu
  for (auto& p : curve.points) CHECK(p.ok);
}

TEST_CASE("condition (I) report on cp2: round FS fibers are honestly non-Morse") {
  auto m = reduction::make_model("cp2_su2");
  auto rep = condition_I_report(*m, 1.0, {0.5, 1.0, 2.0});
  REQUIRE(rep.fibers.size() == 3);
  for (auto& f : rep.fibers) {
    CHECK(f.n_critical > 0);
    CHECK_FALSE(f.is_morse);        // lambda_min multiplicity 2: critical circle
    CHECK_FALSE(f.distinct_values); // the circle shares one value
  }
  CHECK(rep.morse_fraction == 0.0);

  auto sph = reduction::make_model("sphere_s1");
  CHECK_THROWS_AS(condition_I_report(*sph, 1.0, {1.0}), std::invalid_argument);
}

TEST_CASE("equal minima are reported as a tie, not a unique minimum") {
  // symmetric double well about the equator: a bump potential against the
  // weak kinetic term gives two equal-value minima
  auto m = reduction::make_model("sphere_s1");
  auto bump = [](double th) { return -0.5 * std::cos(2 * th); };
  MinimizeConfig cfg;
  cfg.seed = 77;
  auto r = minimize_F(*m, bump, 0.2, cfg);
  CHECK(r.n_local_minima == 2);
  CHECK_FALSE(r.unique_min);
  CHECK(r.in_U);
}

TEST_CASE("spectral_curve flags per-point failures without aborting") {
  auto m = reduction::make_model("sphere_s1");
  MinimizeConfig cfg;
  cfg.seed = 78;
  auto curve = spectral_curve(*m, kZero, {-0.1, 0.5, 1.0}, cfg);
  REQUIRE(curve.points.size() == 3);
  CHECK_FALSE(curve.points[0].ok);  // outside the chamber interior
  CHECK(!curve.points[0].error.empty());
  CHECK(curve.points[1].ok);
  CHECK(curve.points[2].ok);
}

TEST_CASE("minimize_F config validation") {
  auto m = reduction::make_model("sphere_s1");
  MinimizeConfig cfg;
  cfg.multistart = 0;
  CHECK_THROWS_AS(minimize_F(*m, kZero, 1.0, cfg), std::invalid_argument);
}
