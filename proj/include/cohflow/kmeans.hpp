#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cohflow/advect.hpp"

namespace cohflow {

// Read-only view of an M x cols feature matrix with a row stride, so that
// prefix-truncated trajectory features need no copy.
struct DataView {
  const double* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t stride = 0;

  std::span<const double> row(std::size_t j) const {
    return {data + j * stride, cols};
  }
};

DataView ensemble_view(const TrajectoryEnsemble& e);
// View of the first z+1 time samples of every trajectory; requires z <= n.
DataView prefix_view(const TrajectoryEnsemble& e, std::size_t z);

enum class InitMode { RandomPoints, SeededCentroids };

struct KMeansConfig {
  std::size_t k = 1;
  std::size_t max_iterations = 300;
  InitMode init = InitMode::RandomPoints;
  std::uint64_t seed = 0;
  std::size_t restarts = 1;
  unsigned threads = 0;

  void validate(std::size_t rows) const;
};

struct Clustering {
  std::size_t k = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> labels;  // 0-based cluster indices
  std::vector<double> centroids;      // k rows of length cols
  double wcss = 0.0;
  std::size_t iterations = 0;  // assignment passes executed
  std::uint64_t seed = 0;
  // WCSS after each assignment pass, plus the value against the final
  // centroids; non-increasing by Lloyd monotonicity.
  std::vector<double> wcss_history;
  // Distance-evaluation work: rows * k * cols accumulated per assignment
  // pass. Used for the complexity comparisons instead of wall time.
  std::uint64_t assignment_ops = 0;

  std::span<const double> centroid(std::size_t l) const {
    return {centroids.data() + l * cols, cols};
  }
};

// Eq.-style objective: sum over points of the squared distance to their
// cluster centroid, accumulated in point order for reproducibility.
double wcss(const DataView& data, std::span<const std::uint32_t> labels,
            std::span<const double> centroids, std::size_t k);

// Nearest-centroid labels; ties broken toward the lowest cluster index.
// min_dist_sq (optional, same length as rows) receives the achieved
// squared distances.
void assign(const DataView& data, std::span<const double> centroids,
            std::size_t k, std::span<std::uint32_t> labels,
            std::span<double> min_dist_sq, unsigned threads = 0);

// Per-cluster means. Empty clusters are reseeded to the point farthest
// from its own centroid (that point is relabeled), which strictly
// decreases the objective.
std::vector<double> update(const DataView& data, std::span<std::uint32_t> labels,
                           std::size_t k);

// Lloyd iterations from a random-points init (k distinct rows drawn with
// the seeded RNG); stops on label stability or max_iterations. With
// restarts > 1 the lowest-WCSS run of seeds seed, seed+1, ... wins.
Clustering kmeans(const DataView& data, const KMeansConfig& cfg);

// Same loop started from the supplied centroids (k rows of data.cols).
Clustering kmeans_warm(const DataView& data, std::vector<double> centroids0,
                       const KMeansConfig& cfg);

}  // namespace cohflow
