#include "cohflow/ftle.hpp"

#include <cmath>

#include "cohflow/errors.hpp"
#include "cohflow/parallel.hpp"

namespace cohflow {

FlowMapGrid flow_map_from_ensemble(const TrajectoryEnsemble& e) {
  FlowMapGrid fm;
  fm.grid = e.grid;
  fm.t_begin = e.time.t0;
  fm.t_end = e.time.time_at(e.time.n);
  const std::size_t m = e.size();
  fm.positions.resize(m);
  for (std::size_t j = 0; j < m; ++j) fm.positions[j] = e.position(j, e.time.n);
  return fm;
}

namespace {

// 2nd-order derivative along one axis of a row-major grid of values
// accessed through getter(index).
template <typename Getter>
double derivative(Getter&& value, std::size_t i, std::size_t count, double h) {
  if (i == 0)
    return (-3.0 * value(0) + 4.0 * value(1) - value(2)) / (2.0 * h);
  if (i == count - 1)
    return (3.0 * value(count - 1) - 4.0 * value(count - 2) + value(count - 3)) /
           (2.0 * h);
  return (value(i + 1) - value(i - 1)) / (2.0 * h);
}

}  // namespace

Mat2 deformation_gradient(const FlowMapGrid& fm, std::size_t node) {
  const std::size_t cols = fm.grid.nx() + 1;
  const std::size_t rows = fm.grid.ny() + 1;
  if (cols < 3 || rows < 3)
    throw ConfigError("deformation_gradient: need at least 3 nodes per axis");
  const std::size_t ix = node % cols;
  const std::size_t iy = node / cols;

  auto phix_at_x = [&](std::size_t i) { return fm.positions[iy * cols + i].x; };
  auto phiy_at_x = [&](std::size_t i) { return fm.positions[iy * cols + i].y; };
  auto phix_at_y = [&](std::size_t i) { return fm.positions[i * cols + ix].x; };
  auto phiy_at_y = [&](std::size_t i) { return fm.positions[i * cols + ix].y; };

  return {derivative(phix_at_x, ix, cols, fm.grid.dx),
          derivative(phix_at_y, iy, rows, fm.grid.dy),
          derivative(phiy_at_x, ix, cols, fm.grid.dx),
          derivative(phiy_at_y, iy, rows, fm.grid.dy)};
}

double cauchy_green_lambda_max(const Mat2& j) {
  // Delta = J'J, symmetric PSD by construction.
  const double a = j[0] * j[0] + j[2] * j[2];
  const double b = j[0] * j[1] + j[2] * j[3];
  const double c = j[1] * j[1] + j[3] * j[3];
  const double mean = 0.5 * (a + c);
  const double radius = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return mean + radius;
}

ScalarField ftle_field(const FlowMapGrid& fm, double horizon, unsigned threads) {
  if (horizon == 0.0) throw ConfigError("ftle: horizon T must be nonzero");
  ScalarField field;
  field.grid = fm.grid;
  field.quantity = "ftle";
  field.t_begin = fm.t_begin;
  field.t_end = fm.t_end;
  const std::size_t m = fm.positions.size();
  field.values.resize(m);
  const double scale = 1.0 / std::abs(horizon);
  parallel_for(
      m,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t node = lo; node < hi; ++node) {
          double lmax = cauchy_green_lambda_max(deformation_gradient(fm, node));
          field.values[node] = lmax > 0.0 ? scale * 0.5 * std::log(lmax)
                                          : ScalarField::sentinel();
        }
      },
      threads);
  return field;
}

}  // namespace cohflow
