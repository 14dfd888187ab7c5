#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "cohflow/geometry.hpp"

namespace cohflow {

// Periodically perturbed double gyre on [0,2]x[0,1].
struct DoubleGyreParams {
  double amplitude = 0.1;
  double omega = 0.6283185307179586477;  // 2*pi/10
  double epsilon = 0.1;

  // Throws ConfigError unless amplitude > 0, omega != 0, 0 <= epsilon < 0.5.
  void validate() const;
};

// Forced-damped Duffing-van der Pol oscillator. All coefficients are fixed
// (damping 0.5, forcing 0.1, unit frequency), so there is nothing to set.
struct DuffingParams {};

Vec2 eval_double_gyre(const DoubleGyreParams& p, double x, double y, double t);
Vec2 eval_duffing(double x, double y, double t);

// A pure, stateless velocity evaluator u(x, t). Safe to call concurrently.
class VelocityField {
 public:
  using Evaluator = std::function<Vec2(const Vec2&, double)>;

  VelocityField() = default;
  VelocityField(std::string name, Evaluator eval,
                std::optional<Rect> domain_hint = std::nullopt)
      : name_(std::move(name)), eval_(std::move(eval)),
        domain_hint_(domain_hint) {}

  Vec2 operator()(const Vec2& p, double t) const { return eval_(p, t); }
  const std::string& name() const { return name_; }
  const std::optional<Rect>& domain_hint() const { return domain_hint_; }

  static constexpr int dimension = 2;

 private:
  std::string name_;
  Evaluator eval_;
  std::optional<Rect> domain_hint_;
};

VelocityField make_double_gyre(const DoubleGyreParams& p = {});
VelocityField make_duffing();

// Name-based registry so additional analytic fields can be plugged in
// without touching the CLI. "double-gyre" and "duffing-vdp" are built in.
using ParamMap = std::map<std::string, double>;
using FieldFactory = std::function<VelocityField(const ParamMap&)>;

void register_field(const std::string& name, FieldFactory factory);
VelocityField make_field(const std::string& name, const ParamMap& params = {});

}  // namespace cohflow
