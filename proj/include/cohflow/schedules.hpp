#pragma once

#include <string>
#include <vector>

#include "cohflow/kmeans.hpp"
#include "cohflow/wcve.hpp"

namespace cohflow {

// Coarse-to-fine dyadic refinement: clustering starts at time stride 2^N
// and is warm-started level by level down to the full resolution.
// Intermediate levels do not need a converged result, so they get a
// looser iteration cap than the final level.
struct AdaptivePlan {
  unsigned deepest_level = 1;  // N; requires 2^N | n
  std::size_t coarse_max_iterations = 20;
  std::size_t final_max_iterations = 300;
};

// One k-means invocation inside a pipeline; stage boundaries delimit the
// monotone segments of the overall WCSS trace.
struct StageRecord {
  std::string stage;
  std::vector<double> wcss_history;
  std::size_t iterations = 0;
  std::uint64_t assignment_ops = 0;
};

struct AdaptiveResult {
  Clustering clustering;  // full-resolution result
  ScalarField field;
  std::vector<StageRecord> trace;
  std::uint64_t assignment_ops = 0;
};

// Per-cluster means of the level-m subsampled features under the given
// labels; empty clusters are reseeded to the feature of the point farthest
// from its own cluster mean.
std::vector<double> upsample_centroids(const TrajectoryEnsemble& e, unsigned level,
                                       std::span<const std::uint32_t> labels,
                                       std::size_t k);

AdaptiveResult adaptive_wcve(const TrajectoryEnsemble& e, std::size_t k,
                             const AdaptivePlan& plan, std::uint64_t seed,
                             const WcveOptions& opts = {}, unsigned threads = 0);

// Incremental clustering state: a clustering over the prefix 0..z,
// re-classified every alpha new time samples.
struct OnTheFlyState {
  std::size_t z = 0;
  std::size_t alpha = 1;
  Clustering clustering;
  std::vector<StageRecord> trace;
  std::uint64_t assignment_ops = 0;
};

// Cold k-means on prefix(e, z0); cfg.k is the cluster count.
OnTheFlyState onthefly_start(const TrajectoryEnsemble& e, std::size_t z0,
                             const KMeansConfig& cfg);

// Extends the prefix by alpha samples (clamped to n) and warm-starts from
// the per-cluster means of the extended features.
OnTheFlyState onthefly_advance(OnTheFlyState s, const TrajectoryEnsemble& e,
                               std::size_t alpha, const KMeansConfig& cfg);

// Re-targets the clustering to the interval ending at z_new: grows by
// advancing, or shrinks by truncating the features and re-running from the
// truncated per-cluster means.
OnTheFlyState retarget_interval(OnTheFlyState s, const TrajectoryEnsemble& e,
                                std::size_t z_new, const KMeansConfig& cfg);

// WCVE of the state's current clustering over its prefix interval.
ScalarField onthefly_field(const OnTheFlyState& s, const TrajectoryEnsemble& e,
                           const WcveOptions& opts = {});

}  // namespace cohflow
