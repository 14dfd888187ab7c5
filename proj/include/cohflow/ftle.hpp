#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cohflow/advect.hpp"
#include "cohflow/scalar_field.hpp"

namespace cohflow {

// Final-time particle positions on the seeding grid, row-major node order.
struct FlowMapGrid {
  GridSpec grid;
  double t_begin = 0.0;
  double t_end = 0.0;
  std::vector<Vec2> positions;
};

// Row-major 2x2 matrix: {dphix/dx, dphix/dy, dphiy/dx, dphiy/dy}.
using Mat2 = std::array<double, 4>;

FlowMapGrid flow_map_from_ensemble(const TrajectoryEnsemble& e);

// Gradient of the flow map at the given node: central differences at
// interior nodes, 2nd-order one-sided differences on the boundary.
// Requires at least 3 nodes per axis.
Mat2 deformation_gradient(const FlowMapGrid& fm, std::size_t node);

// Largest eigenvalue of the symmetric 2x2 Cauchy-Green tensor J'J via the
// trace/determinant closed form.
double cauchy_green_lambda_max(const Mat2& jacobian);

// sigma = ln(sqrt(lambda_max)) / |T| per node. Rejects T = 0.
ScalarField ftle_field(const FlowMapGrid& fm, double horizon, unsigned threads = 0);

}  // namespace cohflow
