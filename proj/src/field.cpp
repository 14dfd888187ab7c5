#include "cohflow/field.hpp"

#include <cmath>
#include <mutex>

#include "cohflow/errors.hpp"

namespace cohflow {

namespace {
constexpr double kPi = 3.14159265358979323846;

double param_or(const ParamMap& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}
}  // namespace

void DoubleGyreParams::validate() const {
  if (!(amplitude > 0.0)) throw ConfigError("double gyre: amplitude must be > 0");
  if (omega == 0.0) throw ConfigError("double gyre: omega must be nonzero");
  if (!(epsilon >= 0.0 && epsilon < 0.5))
    throw ConfigError("double gyre: epsilon must satisfy 0 <= epsilon < 0.5");
}

Vec2 eval_double_gyre(const DoubleGyreParams& p, double x, double y, double t) {
  // Stream function psi = A sin(pi g(x,t)) sin(pi y) with
  // g = a(t) x^2 + b(t) x, a = eps sin(w t), b = 1 - 2 eps sin(w t);
  // u = -dpsi/dy, v = dpsi/dx.
  const double a = p.epsilon * std::sin(p.omega * t);
  const double b = 1.0 - 2.0 * p.epsilon * std::sin(p.omega * t);
  const double g = a * x * x + b * x;
  const double u = -p.amplitude * kPi * std::sin(kPi * g) * std::cos(kPi * y);
  const double v =
      p.amplitude * kPi * std::cos(kPi * g) * std::sin(kPi * y) * (2.0 * a * x + b);
  return {u, v};
}

Vec2 eval_duffing(double x, double y, double t) {
  return {y, x - x * x * x + 0.5 * y * (1.0 - x * x) + 0.1 * std::sin(t)};
}

VelocityField make_double_gyre(const DoubleGyreParams& p) {
  p.validate();
  return VelocityField(
      "double-gyre",
      [p](const Vec2& pos, double t) { return eval_double_gyre(p, pos.x, pos.y, t); },
      Rect{0.0, 2.0, 0.0, 1.0});
}

VelocityField make_duffing() {
  return VelocityField(
      "duffing-vdp",
      [](const Vec2& pos, double t) { return eval_duffing(pos.x, pos.y, t); });
}

namespace {

std::map<std::string, FieldFactory>& registry() {
  static std::map<std::string, FieldFactory> fields = {
      {"double-gyre",
       [](const ParamMap& params) {
         DoubleGyreParams p;
         p.amplitude = param_or(params, "A", p.amplitude);
         p.omega = param_or(params, "omega", p.omega);
         p.epsilon = param_or(params, "epsilon", p.epsilon);
         return make_double_gyre(p);
       }},
      {"duffing-vdp", [](const ParamMap&) { return make_duffing(); }},
  };
  return fields;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void register_field(const std::string& name, FieldFactory factory) {
  std::lock_guard lock(registry_mutex());
  registry()[name] = std::move(factory);
}

VelocityField make_field(const std::string& name, const ParamMap& params) {
  FieldFactory factory;
  {
    std::lock_guard lock(registry_mutex());
    auto it = registry().find(name);
    if (it == registry().end())
      throw ConfigError("unknown velocity field \"" + name + "\"");
    factory = it->second;
  }
  return factory(params);
}

}  // namespace cohflow
