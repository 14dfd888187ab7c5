#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cohflow/field.hpp"
#include "cohflow/geometry.hpp"

namespace cohflow {

// Sampling times t_i = t0 + i*dt for 0 <= i <= n, horizon T = n*dt.
struct TimeSpec {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t n = 0;

  void validate() const;
  double horizon() const { return dt * static_cast<double>(n); }
  double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
};

// Rectangular seeding grid; node spacing must divide the domain evenly
// (tolerance 1e-9 on the cell counts).
struct GridSpec {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  void validate() const;
  std::size_t nx() const;  // cells along x, so nx()+1 nodes
  std::size_t ny() const;
  std::size_t node_count() const { return (nx() + 1) * (ny() + 1); }
  // Nodes in row-major order: x varies fastest, y outer.
  Vec2 node(std::size_t j) const;
};

// One particle path sampled at the n+1 grid times, stored time-major:
// x(t0) y(t0) x(t1) y(t1) ...
struct Trajectory {
  static constexpr std::size_t dim = 2;
  std::size_t samples = 0;
  std::vector<double> data;

  Vec2 position(std::size_t i) const { return {data[2 * i], data[2 * i + 1]}; }
};

// All M = (nx+1)(ny+1) trajectories seeded on the grid nodes, one row per
// trajectory in the same time-major flattening. The flattening is frozen:
// it is the clustering feature layout and the file format layout.
struct TrajectoryEnsemble {
  static constexpr std::size_t dim = 2;
  GridSpec grid;
  TimeSpec time;
  std::vector<double> data;

  std::size_t size() const { return grid.node_count(); }
  std::size_t samples() const { return time.n + 1; }
  std::size_t feature_length() const { return dim * samples(); }
  std::span<const double> feature(std::size_t j) const {
    return {data.data() + j * feature_length(), feature_length()};
  }
  Vec2 position(std::size_t j, std::size_t i) const {
    const double* p = data.data() + j * feature_length() + dim * i;
    return {p[0], p[1]};
  }
};

std::vector<Vec2> seed_grid(const GridSpec& g);

// One classical RK4 step from x at time t.
Vec2 rk4_step(const VelocityField& f, const Vec2& x, double t, double dt);

// Throws IntegrationError naming the step index on non-finite state.
Trajectory integrate_trajectory(const VelocityField& f, const Vec2& seed,
                                const TimeSpec& ts);

// Integrates every grid node independently (parallel over seeds).
// Deterministic given (f, g, ts). Blow-ups report the seed coordinates.
TrajectoryEnsemble build_ensemble(const VelocityField& f, const GridSpec& g,
                                  const TimeSpec& ts, unsigned threads = 0);

// Truncates every trajectory to columns 0..z. Requires 0 < z <= n.
TrajectoryEnsemble prefix(const TrajectoryEnsemble& e, std::size_t z);

// Keeps columns {0, 2^m, 2*2^m, ..., n}; requires 2^m | n. The result's
// dt is scaled by 2^m so its sample times are unchanged.
TrajectoryEnsemble subsample(const TrajectoryEnsemble& e, unsigned level);

}  // namespace cohflow
