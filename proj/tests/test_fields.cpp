#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cohflow/errors.hpp"
#include "cohflow/field.hpp"

using namespace cohflow;

namespace {
constexpr double kPi = 3.14159265358979323846;
const DoubleGyreParams kReferenceParams{0.1, 2.0 * kPi / 10.0, 0.1};
}  // namespace

TEST_CASE("double gyre: gyre center is stagnant at t=0") {
  Vec2 v = eval_double_gyre(kReferenceParams, 0.5, 0.5, 0.0);
  CHECK(v.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(v.y == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("double gyre: hand value on the bottom wall") {
  // g(x,0) = x, so u = -A*pi*sin(pi/2)*cos(0) = -0.1*pi at (0.5, 0).
  Vec2 v = eval_double_gyre(kReferenceParams, 0.5, 0.0, 0.0);
  CHECK(v.x == doctest::Approx(-0.1 * kPi).epsilon(1e-14));
  CHECK(v.y == doctest::Approx(0.0));
}

TEST_CASE("double gyre: no normal flow through the domain boundary") {
  for (double t : {0.0, 1.3, 7.77, 42.0}) {
    for (double x : {0.0, 0.31, 1.0, 1.9, 2.0}) {
      CHECK(eval_double_gyre(kReferenceParams, x, 0.0, t).y == doctest::Approx(0.0));
      CHECK(eval_double_gyre(kReferenceParams, x, 1.0, t).y == doctest::Approx(0.0));
    }
    for (double y : {0.0, 0.25, 0.5, 0.99, 1.0}) {
      // g(0,t) = 0 and g(2,t) = 4a + 2b = 2, so sin(pi g) = 0 on both walls.
      CHECK(eval_double_gyre(kReferenceParams, 0.0, y, t).x ==
            doctest::Approx(0.0).epsilon(1e-12));
      CHECK(std::abs(eval_double_gyre(kReferenceParams, 2.0, y, t).x) < 1e-13);
    }
  }
}

TEST_CASE("double gyre: steady when epsilon = 0") {
  DoubleGyreParams steady = kReferenceParams;
  steady.epsilon = 0.0;
  Vec2 ref = eval_double_gyre(steady, 0.7, 0.3, 0.0);
  for (double t : {0.5, 2.0, 13.7}) {
    Vec2 v = eval_double_gyre(steady, 0.7, 0.3, t);
    CHECK(v.x == ref.x);
    CHECK(v.y == ref.y);
  }
}

TEST_CASE("double gyre: parameter validation") {
  CHECK_THROWS_AS(make_double_gyre({-1.0, 1.0, 0.1}), ConfigError);
  CHECK_THROWS_AS(make_double_gyre({0.1, 0.0, 0.1}), ConfigError);
  CHECK_THROWS_AS(make_double_gyre({0.1, 1.0, 0.5}), ConfigError);
  CHECK_NOTHROW(make_double_gyre({0.1, 1.0, 0.49}));
}

TEST_CASE("duffing: equilibria and hand value") {
  Vec2 origin = eval_duffing(0.0, 0.0, 0.0);
  CHECK(origin.x == 0.0);
  CHECK(origin.y == 0.0);

  Vec2 saddle = eval_duffing(1.0, 0.0, 0.0);
  CHECK(saddle.x == 0.0);
  CHECK(saddle.y == 0.0);

  // 2 - 8 + 0.5*1*(1-4) + 0.1*sin(pi/2) = -7.4
  Vec2 v = eval_duffing(2.0, 1.0, kPi / 2.0);
  CHECK(v.x == doctest::Approx(1.0));
  CHECK(v.y == doctest::Approx(-7.4).epsilon(1e-14));
}

TEST_CASE("evaluation is bit-deterministic") {
  VelocityField gyre = make_double_gyre(kReferenceParams);
  VelocityField duffing = make_duffing();
  for (const VelocityField* f : {&gyre, &duffing}) {
    Vec2 a = (*f)({0.3123, 0.711}, 4.25);
    Vec2 b = (*f)({0.3123, 0.711}, 4.25);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
  }
}

TEST_CASE("registry: build by name, reject unknown, allow extension") {
  VelocityField f = make_field("double-gyre", {{"A", 0.2}, {"epsilon", 0.0}});
  CHECK(f.name() == "double-gyre");
  CHECK(make_field("duffing-vdp").name() == "duffing-vdp");
  CHECK_THROWS_AS(make_field("no-such-field"), ConfigError);

  register_field("uniform", [](const ParamMap& p) {
    double ux = p.count("ux") ? p.at("ux") : 1.0;
    return VelocityField("uniform", [ux](const Vec2&, double) { return Vec2{ux, 0.0}; });
  });
  Vec2 v = make_field("uniform", {{"ux", 3.0}})({0, 0}, 0.0);
  CHECK(v.x == 3.0);
}

TEST_CASE("double gyre: domain hint is the reference box") {
  VelocityField f = make_double_gyre(kReferenceParams);
  REQUIRE(f.domain_hint().has_value());
  CHECK(f.domain_hint()->contains({1.0, 0.5}));
  CHECK_FALSE(f.domain_hint()->contains({2.5, 0.5}));
}
