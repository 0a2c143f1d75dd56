#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "legendrix/lie_core.hpp"

using namespace legendrix;
using namespace legendrix::lie;

namespace {
Vec unit(int d, int i) { return Vec::Unit(d, i); }

Vec random_vec(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0, 1);
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = g(rng);
  return v;
}
}  // namespace

TEST_CASE("su2 structure constants are the Levi-Civita symbol") {
  auto alg = build_algebra(AlgebraName::su2);
  CHECK(alg.dim == 3);
  CHECK(alg.structure(0, 1, 2) == doctest::Approx(1.0));
  CHECK(alg.structure(1, 0, 2) == doctest::Approx(-1.0));
  CHECK(alg.structure(1, 2, 0) == doctest::Approx(1.0));
  CHECK(alg.structure(2, 0, 1) == doctest::Approx(1.0));
  CHECK(alg.structure(0, 0, 1) == 0.0);
  CHECK(alg.structure(0, 1, 1) == 0.0);
}

TEST_CASE("su2 Killing form is -2 I, computed from the structure constants") {
  // hand contraction for one entry: K_11 = sum_{c,d} c_1cd c_1dc
  //   = c_123 c_132 + c_132 c_123 = (1)(-1) + (-1)(1) = -2
  auto alg = build_algebra(AlgebraName::su2);
  CHECK((alg.killing + 2.0 * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("su3 model: Jacobi, antisymmetry, Killing definiteness and trace normalization") {
  auto alg = build_algebra(AlgebraName::su3);
  CHECK(alg.dim == 8);
  CHECK(jacobi_residual(alg) < 1e-12);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k)
        CHECK(alg.structure(i, j, k) == doctest::Approx(-alg.structure(j, i, k)).epsilon(1e-15));
  // basis x_a = -i lambda_a: c = 2 f, so K = 4 * (-3) I = -12 I
  CHECK((alg.killing + 12.0 * Mat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
  // tr(x_a x_b) = -2 delta_ab in the defining representation
  for (int a = 0; a < 8; ++a)
    for (int b = a; b < 8; ++b) {
      CMat Ma = hermitian_model(alg, unit(8, a));
      CMat Mb = hermitian_model(alg, unit(8, b));
      double tr = (Ma * Mb).trace().real();  // tr(lambda_a lambda_b) = 2 delta
      CHECK(tr == doctest::Approx(a == b ? 2.0 : 0.0).epsilon(1e-14));
    }
}

TEST_CASE("Killing invariance K([v,w],u) + K(w,[v,u]) = 0") {
  for (auto name : {AlgebraName::su2, AlgebraName::su3}) {
    auto alg = build_algebra(name);
    auto rng = num::rng_stream(3, name == AlgebraName::su2 ? 0 : 1);
    for (int t = 0; t < 50; ++t) {
      Vec v = random_vec(alg.dim, rng), w = random_vec(alg.dim, rng),
          u = random_vec(alg.dim, rng);
      double r = alg.bracket(v, w).dot(alg.killing * u) + w.dot(alg.killing * alg.bracket(v, u));
      CHECK(std::abs(r) < 1e-9);
    }
  }
}

TEST_CASE("build_algebra rejects the circle name; circle_algebra provides it") {
  CHECK_THROWS_AS(build_algebra(AlgebraName::circle), std::invalid_argument);
  auto c = circle_algebra();
  CHECK(c.dim == 1);
  CHECK(c.killing(0, 0) == 0.0);
  CHECK(c.structure(0, 0, 0) == 0.0);
}

TEST_CASE("Weyl chamber membership") {
  auto su2 = build_algebra(AlgebraName::su2);
  CHECK_NOTHROW(make_chamber_point(su2, 0.3));
  CHECK_THROWS_AS(make_chamber_point(su2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_chamber_point(su2, -1.0), std::invalid_argument);

  auto su3 = build_algebra(AlgebraName::su3);
  Vec inside(2), wall(2), outside(2);
  inside << 1.0, 1.0;
  wall << 1.0, 1.0 / std::sqrt(3.0);  // on the second wall
  outside << -0.5, 1.0;
  CHECK_NOTHROW(make_chamber_point(su3, inside));
  CHECK_THROWS_AS(make_chamber_point(su3, wall), std::invalid_argument);
  CHECK_THROWS_AS(make_chamber_point(su3, outside), std::invalid_argument);
  // interior point corresponds to strictly ordered eigenvalues
  auto mu = make_chamber_point(su3, inside);
  CMat M = hermitian_model(su3, embed_chamber(su3, mu));
  Eigen::SelfAdjointEigenSolver<CMat> es(M);
  CHECK(es.eigenvalues()(0) < es.eigenvalues()(1));
  CHECK(es.eigenvalues()(1) < es.eigenvalues()(2));
}

TEST_CASE("coadjoint_infinitesimal on su2 basis points") {
  auto alg = build_algebra(AlgebraName::su2);
  // Cartan direction fixes its own dual point
  CHECK(coadjoint_infinitesimal(alg, unit(3, 2), unit(3, 2)).norm() == 0.0);
  // expand the epsilon contraction: ad*_{e3} e1* = +e2* in this convention
  Vec r = coadjoint_infinitesimal(alg, unit(3, 2), unit(3, 0));
  CHECK((r - unit(3, 1)).norm() < 1e-15);
}

TEST_CASE("duality of the sign convention: <ad*_v xi, w> + <xi, [v, w]> = 0") {
  for (auto name : {AlgebraName::su2, AlgebraName::su3}) {
    auto alg = build_algebra(name);
    auto rng = num::rng_stream(5, name == AlgebraName::su2 ? 0 : 1);
    for (int t = 0; t < 500; ++t) {
      Vec v = random_vec(alg.dim, rng), xi = random_vec(alg.dim, rng);
      Vec ad = coadjoint_infinitesimal(alg, v, xi);
      for (int w = 0; w < alg.dim; ++w) {
        double r = ad(w) + xi.dot(alg.bracket(v, unit(alg.dim, w)));
        CHECK(std::abs(r) < 1e-12);
      }
    }
  }
}

TEST_CASE("Casimir derivative along coadjoint directions vanishes") {
  for (auto name : {AlgebraName::su2, AlgebraName::su3}) {
    auto alg = build_algebra(name);
    auto rng = num::rng_stream(6, name == AlgebraName::su2 ? 0 : 1);
    for (int t = 0; t < 100; ++t) {
      Vec v = random_vec(alg.dim, rng), xi = random_vec(alg.dim, rng);
      Vec dxi = coadjoint_infinitesimal(alg, v, xi);
      double scale = std::max(1.0, casimirs(alg, xi).cwiseAbs().maxCoeff());
      // analytic directional derivatives: grad(|xi|^2) = 2 xi,
      // grad(tr M^2) = 4 xi, grad(tr M^3) = 6 coords(M^2)
      if (name == AlgebraName::su2) {
        CHECK(std::abs(2.0 * xi.dot(dxi)) < 1e-12 * scale);
      } else {
        CHECK(std::abs(4.0 * xi.dot(dxi)) < 1e-12 * scale);
        CMat M = hermitian_model(alg, xi);
        Vec m2 = coords_from_model(alg, CMat(M * M));
        CHECK(std::abs(6.0 * m2.dot(dxi)) < 1e-12 * scale);
      }
      // finite-difference sanity at the roundoff floor
      const double h = 1e-6;
      Vec cp = casimirs(alg, xi + h * dxi), cm = casimirs(alg, xi - h * dxi);
      CHECK(((cp - cm) / (2 * h)).cwiseAbs().maxCoeff() < 1e-7 * scale);
    }
  }
}

TEST_CASE("coadjoint_flow: quarter rotation about e3 maps e1* to e2*") {
  auto alg = build_algebra(AlgebraName::su2);
  auto mu = make_chamber_point(alg, 1.0);
  OrbitPoint start = make_orbit_point(alg, unit(3, 0), mu);
  auto end = coadjoint_flow(alg, unit(3, 2), M_PI / 2, start);
  CHECK((end.xi - unit(3, 1)).norm() < 1e-12);
  // t = 0 is the identity
  auto same = coadjoint_flow(alg, unit(3, 2), 0.0, start);
  CHECK((same.xi - start.xi).norm() < 1e-14);
}

TEST_CASE("coadjoint_flow is a one-parameter group and preserves Casimirs") {
  for (auto name : {AlgebraName::su2, AlgebraName::su3}) {
    auto alg = build_algebra(name);
    auto rng = num::rng_stream(8, name == AlgebraName::su2 ? 0 : 1);
    Vec muv = (name == AlgebraName::su2) ? (Vec(1) << 1.3).finished()
                                         : (Vec(2) << 0.9, 1.4).finished();
    auto mu = make_chamber_point(alg, muv);
    Vec mu_emb = embed_chamber(alg, mu);
    for (int t = 0; t < 20; ++t) {
      Vec v = random_vec(alg.dim, rng);
      double s1 = 0.7 * t / 20.0 + 0.1, s2 = -0.4 + t * 0.05;
      OrbitPoint x0 = make_orbit_point(alg, random_orbit_point(alg, mu_emb, rng), mu);
      auto a = coadjoint_flow(alg, v, s1 + s2, x0);
      auto b = coadjoint_flow(alg, v, s2, coadjoint_flow(alg, v, s1, x0));
      CHECK((a.xi - b.xi).norm() < 1e-9);
      CHECK(casimir_residual(alg, a.xi, mu_emb) < 1e-10);
    }
  }
}

TEST_CASE("flow derivative at t=0 matches coadjoint_infinitesimal") {
  auto alg = build_algebra(AlgebraName::su3);
  auto rng = num::rng_stream(9, 0);
  Vec muv(2);
  muv << 1.0, 1.0;
  auto mu = make_chamber_point(alg, muv);
  Vec mu_emb = embed_chamber(alg, mu);
  for (int t = 0; t < 10; ++t) {
    Vec v = random_vec(8, rng);
    Vec xi = random_orbit_point(alg, mu_emb, rng);
    OrbitPoint x0 = make_orbit_point(alg, xi, mu);
    const double h = 1e-6;
    Vec fd = (coadjoint_flow(alg, v, h, x0).xi - coadjoint_flow(alg, v, -h, x0).xi) / (2 * h);
    CHECK((fd - coadjoint_infinitesimal(alg, v, xi)).norm() < 1e-7 * (1 + v.norm()));
  }
}

TEST_CASE("positive Killing form C = -K is constant on coadjoint orbits") {
  for (auto name : {AlgebraName::su2, AlgebraName::su3}) {
    auto alg = build_algebra(name);
    Mat C = alg.killing_dual_form();
    Eigen::SelfAdjointEigenSolver<Mat> es(C, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    auto rng = num::rng_stream(10, name == AlgebraName::su2 ? 0 : 1);
    Vec muv = (name == AlgebraName::su2) ? (Vec(1) << 2.0).finished()
                                         : (Vec(2) << 1.0, 1.0).finished();
    auto mu = make_chamber_point(alg, muv);
    Vec mu_emb = embed_chamber(alg, mu);
    double c0 = mu_emb.dot(C * mu_emb);
    OrbitPoint x0 = make_orbit_point(alg, mu_emb, mu);
    for (int t = 0; t < 30; ++t) {
      Vec v = random_vec(alg.dim, rng);
      Vec xi = coadjoint_flow(alg, v, 0.8, x0).xi;
      CHECK(std::abs(xi.dot(C * xi) - c0) < 1e-9 * std::max(1.0, c0));
    }
  }
}

TEST_CASE("coadjoint_group_matrix is orthogonal and consistent with the flow") {
  auto alg = build_algebra(AlgebraName::su3);
  auto rng = num::rng_stream(11, 0);
  Vec muv(2);
  muv << 0.7, 1.9;
  auto mu = make_chamber_point(alg, muv);
  Vec mu_emb = embed_chamber(alg, mu);
  OrbitPoint x0 = make_orbit_point(alg, mu_emb, mu);
  for (int t = 0; t < 10; ++t) {
    Vec v = random_vec(8, rng);
    Mat R = coadjoint_group_matrix(alg, v, 0.6);
    CHECK((R.transpose() * R - Mat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((R * mu_emb - coadjoint_flow(alg, v, 0.6, x0).xi).norm() < 1e-10);
  }
}

TEST_CASE("orbit projection restores Casimirs; orbit point validation") {
  auto alg = build_algebra(AlgebraName::su3);
  auto rng = num::rng_stream(12, 0);
  Vec muv(2);
  muv << 1.0, 1.0;
  auto mu = make_chamber_point(alg, muv);
  Vec mu_emb = embed_chamber(alg, mu);
  for (int t = 0; t < 30; ++t) {
    Vec xi = random_orbit_point(alg, mu_emb, rng) + 1e-3 * random_vec(8, rng);
    Vec p = project_to_orbit(alg, xi, mu_emb);
    CHECK(casimir_residual(alg, p, mu_emb) < 1e-12);
  }
  CHECK_THROWS_AS(make_orbit_point(alg, 2.0 * mu_emb, mu), std::invalid_argument);
}

TEST_CASE("hermitian model round-trips coordinates") {
  for (auto name : {AlgebraName::su2, AlgebraName::su3}) {
    auto alg = build_algebra(name);
    auto rng = num::rng_stream(13, name == AlgebraName::su2 ? 0 : 1);
    for (int t = 0; t < 20; ++t) {
      Vec xi = random_vec(alg.dim, rng);
      CHECK((coords_from_model(alg, hermitian_model(alg, xi)) - xi).norm() < 1e-13);
    }
  }
}

TEST_CASE("orbit tangent span rank equals the orbit dimension") {
  auto su2 = build_algebra(AlgebraName::su2);
  auto su3 = build_algebra(AlgebraName::su3);
  auto rng = num::rng_stream(14, 0);
  Vec m2 = embed_chamber(su2, make_chamber_point(su2, 1.0));
  Vec m3v(2);
  m3v << 1.0, 1.0;
  Vec m3 = embed_chamber(su3, make_chamber_point(su3, m3v));
  Eigen::JacobiSVD<Mat> svd2(orbit_tangent_span(su2, random_orbit_point(su2, m2, rng)));
  svd2.setThreshold(1e-10);
  CHECK(svd2.rank() == orbit_dim(su2, make_chamber_point(su2, 1.0)));
  Eigen::JacobiSVD<Mat> svd3(orbit_tangent_span(su3, random_orbit_point(su3, m3, rng)));
  svd3.setThreshold(1e-10);
  CHECK(svd3.rank() == 6);
}
