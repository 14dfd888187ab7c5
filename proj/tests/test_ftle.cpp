#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cohflow/advect.hpp"
#include "cohflow/errors.hpp"
#include "cohflow/ftle.hpp"

using namespace cohflow;

namespace {

VelocityField saddle_field() {
  return VelocityField("saddle",
                       [](const Vec2& p, double) { return Vec2{p.x, -p.y}; });
}

FlowMapGrid identity_map(const GridSpec& g) {
  FlowMapGrid fm;
  fm.grid = g;
  fm.t_end = 1.0;
  fm.positions.resize(g.node_count());
  for (std::size_t j = 0; j < fm.positions.size(); ++j) fm.positions[j] = g.node(j);
  return fm;
}

}  // namespace

TEST_CASE("flow_map_from_ensemble: constant and zero fields") {
  GridSpec g{0, 1, 0, 1, 0.25, 0.25};
  VelocityField shift("shift", [](const Vec2&, double) { return Vec2{1, 0}; });
  FlowMapGrid fm = flow_map_from_ensemble(build_ensemble(shift, g, {0, 0.1, 10}));
  for (std::size_t j = 0; j < fm.positions.size(); ++j) {
    CHECK(fm.positions[j].x == doctest::Approx(g.node(j).x + 1.0).epsilon(1e-13));
    CHECK(fm.positions[j].y == g.node(j).y);
  }

  VelocityField still("still", [](const Vec2&, double) { return Vec2{0, 0}; });
  FlowMapGrid id = flow_map_from_ensemble(build_ensemble(still, g, {0, 0.1, 10}));
  for (std::size_t j = 0; j < id.positions.size(); ++j) {
    CHECK(id.positions[j].x == g.node(j).x);
    CHECK(id.positions[j].y == g.node(j).y);
  }
}

TEST_CASE("flow_map_from_ensemble: saddle approximates (e x, y/e)") {
  GridSpec g{-1, 1, -1, 1, 0.25, 0.25};
  FlowMapGrid fm =
      flow_map_from_ensemble(build_ensemble(saddle_field(), g, {0, 0.01, 100}));
  for (std::size_t j = 0; j < fm.positions.size(); ++j) {
    Vec2 seed = g.node(j);
    CHECK(std::abs(fm.positions[j].x - std::exp(1.0) * seed.x) < 1e-7);
    CHECK(std::abs(fm.positions[j].y - seed.y / std::exp(1.0)) < 1e-7);
  }
}

TEST_CASE("deformation_gradient: identity map gives identity everywhere") {
  FlowMapGrid fm = identity_map({0, 1, 0, 1, 0.25, 0.25});
  for (std::size_t j = 0; j < fm.positions.size(); ++j) {
    Mat2 grad = deformation_gradient(fm, j);
    CHECK(grad[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(grad[1] == doctest::Approx(0.0));
    CHECK(grad[2] == doctest::Approx(0.0));
    CHECK(grad[3] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("deformation_gradient: exact for affine flow maps") {
  // phi(x) = A x + b with A = [[2, 0.5], [-1, 3]], b = (0.3, -0.7).
  GridSpec g{0, 1, 0, 1, 0.125, 0.125};
  FlowMapGrid fm;
  fm.grid = g;
  fm.positions.resize(g.node_count());
  for (std::size_t j = 0; j < fm.positions.size(); ++j) {
    Vec2 p = g.node(j);
    fm.positions[j] = {2.0 * p.x + 0.5 * p.y + 0.3, -1.0 * p.x + 3.0 * p.y - 0.7};
  }
  for (std::size_t j = 0; j < fm.positions.size(); ++j) {
    Mat2 grad = deformation_gradient(fm, j);
    CHECK(std::abs(grad[0] - 2.0) < 1e-12);
    CHECK(std::abs(grad[1] - 0.5) < 1e-12);
    CHECK(std::abs(grad[2] + 1.0) < 1e-12);
    CHECK(std::abs(grad[3] - 3.0) < 1e-12);
  }
}

TEST_CASE("deformation_gradient: saddle Jacobian is diag(e, 1/e)") {
  GridSpec g{-1, 1, -1, 1, 1.0 / 16, 1.0 / 16};
  FlowMapGrid fm =
      flow_map_from_ensemble(build_ensemble(saddle_field(), g, {0, 0.01, 100}));
  for (std::size_t j = 0; j < fm.positions.size(); ++j) {
    Mat2 grad = deformation_gradient(fm, j);
    CHECK(std::abs(grad[0] - std::exp(1.0)) < 1e-4);
    CHECK(std::abs(grad[3] - std::exp(-1.0)) < 1e-4);
    CHECK(std::abs(grad[1]) < 1e-4);
    CHECK(std::abs(grad[2]) < 1e-4);
  }
}

TEST_CASE("deformation_gradient: needs 3 nodes per axis") {
  FlowMapGrid fm = identity_map({0, 1, 0, 1, 0.5, 1.0});
  CHECK_THROWS_AS((void)deformation_gradient(fm, 0), ConfigError);
}

TEST_CASE("cauchy_green_lambda_max: closed form on known matrices") {
  CHECK(cauchy_green_lambda_max({1, 0, 0, 1}) == doctest::Approx(1.0));
  // J = diag(3, 2) -> J'J = diag(9, 4).
  CHECK(cauchy_green_lambda_max({3, 0, 0, 2}) == doctest::Approx(9.0));
  // Rotation: J'J = I regardless of angle.
  double c = std::cos(0.7), s = std::sin(0.7);
  CHECK(cauchy_green_lambda_max({c, -s, s, c}) == doctest::Approx(1.0));
}

TEST_CASE("cauchy-green tensor: symmetric PSD at every node") {
  VelocityField gyre = make_field("double-gyre");
  GridSpec g{0, 2, 0, 1, 1.0 / 16, 1.0 / 16};
  FlowMapGrid fm = flow_map_from_ensemble(build_ensemble(gyre, g, {0, 0.1, 50}));
  for (std::size_t j = 0; j < fm.positions.size(); ++j) {
    Mat2 grad = deformation_gradient(fm, j);
    double a = grad[0] * grad[0] + grad[2] * grad[2];
    double b = grad[0] * grad[1] + grad[2] * grad[3];
    double c2 = grad[1] * grad[1] + grad[3] * grad[3];
    // Off-diagonals agree bit-exactly by construction; eigenvalues >= -1e-12.
    double mean = 0.5 * (a + c2);
    double radius = std::sqrt(0.25 * (a - c2) * (a - c2) + b * b);
    CHECK(mean - radius >= -1e-12);
    CHECK(mean + radius == cauchy_green_lambda_max(grad));
  }
}

TEST_CASE("ftle_field: identity and rigid translation give zero") {
  FlowMapGrid id = identity_map({0, 1, 0, 1, 0.25, 0.25});
  ScalarField f = ftle_field(id, 2.0);
  for (double v : f.values) CHECK(v == doctest::Approx(0.0));

  // Dyadic offset keeps node + c exact, so differencing recovers the
  // identity bit-exactly and sigma is exactly zero.
  FlowMapGrid shifted = id;
  for (Vec2& p : shifted.positions) p = p + Vec2{0.5, -1.25};
  ScalarField g = ftle_field(shifted, 1.0);
  for (double v : g.values) CHECK(v == 0.0);

  FlowMapGrid general = id;
  for (Vec2& p : general.positions) p = p + Vec2{0.4, -1.1};
  ScalarField h = ftle_field(general, 1.0);
  for (double v : h.values) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("ftle_field: saddle gives sigma = 1 everywhere") {
  GridSpec g{-1, 1, -1, 1, 1.0 / 16, 1.0 / 16};
  FlowMapGrid fm =
      flow_map_from_ensemble(build_ensemble(saddle_field(), g, {0, 0.01, 100}));
  ScalarField f = ftle_field(fm, 1.0);
  for (double v : f.values) CHECK(std::abs(v - 1.0) < 1e-3);
}

TEST_CASE("ftle_field: rejects T = 0") {
  FlowMapGrid id = identity_map({0, 1, 0, 1, 0.25, 0.25});
  CHECK_THROWS_AS((void)ftle_field(id, 0.0), ConfigError);
}

TEST_CASE("ftle_field: double gyre ridge near x = 1") {
  VelocityField gyre = make_field("double-gyre");
  GridSpec g{0, 2, 0, 1, 1.0 / 64, 1.0 / 64};
  FlowMapGrid fm = flow_map_from_ensemble(build_ensemble(gyre, g, {0, 0.1, 150}));
  ScalarField f = ftle_field(fm, 15.0);

  // sigma >= -tol for the volume-preserving gyre at interior nodes.
  std::size_t cols = g.nx() + 1;
  std::size_t rows = g.ny() + 1;
  double best = -1e30;
  double best_x = 0.0;
  for (std::size_t iy = 1; iy + 1 < rows; ++iy)
    for (std::size_t ix = 1; ix + 1 < cols; ++ix) {
      double v = f.values[iy * cols + ix];
      CHECK(v >= -1e-6);
      if (v > best) {
        best = v;
        best_x = g.node(iy * cols + ix).x;
      }
    }
  // The strongest stretching sits in the central filament region.
  CHECK(best > 0.2);
  CHECK(std::abs(best_x - 1.0) < 0.5);
}
