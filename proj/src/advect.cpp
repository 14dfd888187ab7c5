#include "cohflow/advect.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

#include "cohflow/errors.hpp"
#include "cohflow/parallel.hpp"

namespace cohflow {

void TimeSpec::validate() const {
  if (!(dt > 0.0)) throw ConfigError("time: dt must be > 0");
  if (n < 1) throw ConfigError("time: n must be >= 1");
  if (!std::isfinite(t0)) throw ConfigError("time: t0 must be finite");
}

namespace {

// Cell count along one axis, rejecting non-commensurate spacing.
std::size_t cell_count(double lo, double hi, double h, const char* axis) {
  double ratio = (hi - lo) / h;
  double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
    std::ostringstream msg;
    msg << "grid: spacing d" << axis << " = " << h
        << " does not evenly divide [" << lo << ", " << hi << "]";
    throw ConfigError(msg.str());
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

void GridSpec::validate() const {
  if (!(xmax > xmin)) throw ConfigError("grid: xmax must exceed xmin");
  if (!(ymax > ymin)) throw ConfigError("grid: ymax must exceed ymin");
  if (!(dx > 0.0)) throw ConfigError("grid: dx must be > 0");
  if (!(dy > 0.0)) throw ConfigError("grid: dy must be > 0");
  cell_count(xmin, xmax, dx, "x");
  cell_count(ymin, ymax, dy, "y");
}

std::size_t GridSpec::nx() const { return cell_count(xmin, xmax, dx, "x"); }
std::size_t GridSpec::ny() const { return cell_count(ymin, ymax, dy, "y"); }

Vec2 GridSpec::node(std::size_t j) const {
  std::size_t cols = nx() + 1;
  std::size_t iy = j / cols;
  std::size_t ix = j % cols;
  return {xmin + dx * static_cast<double>(ix), ymin + dy * static_cast<double>(iy)};
}

std::vector<Vec2> seed_grid(const GridSpec& g) {
  g.validate();
  std::size_t cols = g.nx() + 1;
  std::size_t rows = g.ny() + 1;
  std::vector<Vec2> seeds;
  seeds.reserve(cols * rows);
  for (std::size_t iy = 0; iy < rows; ++iy)
    for (std::size_t ix = 0; ix < cols; ++ix)
      seeds.push_back({g.xmin + g.dx * static_cast<double>(ix),
                       g.ymin + g.dy * static_cast<double>(iy)});
  return seeds;
}

Vec2 rk4_step(const VelocityField& f, const Vec2& x, double t, double dt) {
  const Vec2 k1 = f(x, t);
  const Vec2 k2 = f(x + (dt / 2.0) * k1, t + dt / 2.0);
  const Vec2 k3 = f(x + (dt / 2.0) * k2, t + dt / 2.0);
  const Vec2 k4 = f(x + dt * k3, t + dt);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate_trajectory(const VelocityField& f, const Vec2& seed,
                                const TimeSpec& ts) {
  ts.validate();
  Trajectory traj;
  traj.samples = ts.n + 1;
  traj.data.resize(2 * traj.samples);
  traj.data[0] = seed.x;
  traj.data[1] = seed.y;
  Vec2 x = seed;
  for (std::size_t i = 1; i <= ts.n; ++i) {
    x = rk4_step(f, x, ts.time_at(i - 1), ts.dt);
    if (!x.finite()) {
      std::ostringstream msg;
      msg << "non-finite state at step " << i << " (t = " << ts.time_at(i) << ")";
      throw IntegrationError(msg.str());
    }
    traj.data[2 * i] = x.x;
    traj.data[2 * i + 1] = x.y;
  }
  return traj;
}

TrajectoryEnsemble build_ensemble(const VelocityField& f, const GridSpec& g,
                                  const TimeSpec& ts, unsigned threads) {
  g.validate();
  ts.validate();
  TrajectoryEnsemble e;
  e.grid = g;
  e.time = ts;
  const std::size_t m = e.size();
  const std::size_t p = e.feature_length();
  e.data.resize(m * p);

  std::mutex error_mutex;
  std::string first_error;
  parallel_for(
      m,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j < hi; ++j) {
          Vec2 seed = g.node(j);
          try {
            Trajectory traj = integrate_trajectory(f, seed, ts);
            std::copy(traj.data.begin(), traj.data.end(), e.data.begin() + j * p);
          } catch (const IntegrationError& err) {
            std::lock_guard lock(error_mutex);
            if (first_error.empty()) {
              std::ostringstream msg;
              msg << "seed (" << seed.x << ", " << seed.y << "): " << err.what();
              first_error = msg.str();
            }
            return;
          }
        }
      },
      threads);
  if (!first_error.empty()) throw IntegrationError(first_error);
  return e;
}

TrajectoryEnsemble prefix(const TrajectoryEnsemble& e, std::size_t z) {
  if (z == 0 || z > e.time.n)
    throw ConfigError("prefix: z must satisfy 0 < z <= n");
  TrajectoryEnsemble out;
  out.grid = e.grid;
  out.time = e.time;
  out.time.n = z;
  const std::size_t m = e.size();
  const std::size_t p_in = e.feature_length();
  const std::size_t p_out = out.feature_length();
  out.data.resize(m * p_out);
  for (std::size_t j = 0; j < m; ++j)
    std::copy_n(e.data.begin() + j * p_in, p_out, out.data.begin() + j * p_out);
  return out;
}

TrajectoryEnsemble subsample(const TrajectoryEnsemble& e, unsigned level) {
  const std::size_t stride = std::size_t{1} << level;
  if (e.time.n % stride != 0)
    throw ConfigError("subsample: n must be divisible by 2^level");
  if (level == 0) return e;
  TrajectoryEnsemble out;
  out.grid = e.grid;
  out.time.t0 = e.time.t0;
  out.time.dt = e.time.dt * static_cast<double>(stride);
  out.time.n = e.time.n / stride;
  const std::size_t m = e.size();
  const std::size_t p_in = e.feature_length();
  const std::size_t p_out = out.feature_length();
  out.data.resize(m * p_out);
  for (std::size_t j = 0; j < m; ++j) {
    const double* src = e.data.data() + j * p_in;
    double* dst = out.data.data() + j * p_out;
    for (std::size_t i = 0; i <= out.time.n; ++i) {
      dst[2 * i] = src[2 * i * stride];
      dst[2 * i + 1] = src[2 * i * stride + 1];
    }
  }
  return out;
}

}  // namespace cohflow
