#include "cohflow/schedules.hpp"

#include <algorithm>

#include "cohflow/errors.hpp"

namespace cohflow {

namespace {

double deviation_sq(std::span<const double> row, const double* centroid) {
  double acc = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    double diff = row[i] - centroid[i];
    acc += diff * diff;
  }
  return acc;
}

// Per-cluster means under fixed labels; empty clusters receive the row of
// the point farthest from its own mean (labels untouched; the next warm
// k-means pass re-assigns).
std::vector<double> means_with_reseed(const DataView& data,
                                      std::span<const std::uint32_t> labels,
                                      std::size_t k) {
  const std::size_t p = data.cols;
  std::vector<double> centroids(k * p, 0.0);
  std::vector<std::size_t> card(k, 0);
  for (std::size_t j = 0; j < data.rows; ++j) {
    if (labels[j] >= k) throw ConfigError("centroid means: label out of range");
    auto row = data.row(j);
    double* c = centroids.data() + labels[j] * p;
    for (std::size_t i = 0; i < p; ++i) c[i] += row[i];
    ++card[labels[j]];
  }
  for (std::size_t l = 0; l < k; ++l)
    if (card[l] > 0) {
      double inv = 1.0 / static_cast<double>(card[l]);
      double* c = centroids.data() + l * p;
      for (std::size_t i = 0; i < p; ++i) c[i] *= inv;
    }
  for (std::size_t l = 0; l < k; ++l) {
    if (card[l] > 0) continue;
    std::size_t worst = data.rows;
    double worst_d = -1.0;
    for (std::size_t j = 0; j < data.rows; ++j) {
      if (card[labels[j]] < 2) continue;
      double d = deviation_sq(data.row(j), centroids.data() + labels[j] * p);
      if (d > worst_d) {
        worst_d = d;
        worst = j;
      }
    }
    if (worst == data.rows) continue;
    auto row = data.row(worst);
    std::copy(row.begin(), row.end(), centroids.begin() + l * p);
  }
  return centroids;
}

StageRecord record_stage(std::string name, const Clustering& c) {
  return {std::move(name), c.wcss_history, c.iterations, c.assignment_ops};
}

}  // namespace

std::vector<double> upsample_centroids(const TrajectoryEnsemble& e, unsigned level,
                                       std::span<const std::uint32_t> labels,
                                       std::size_t k) {
  if (labels.size() != e.size())
    throw ConfigError("upsample_centroids: label vector length mismatch");
  TrajectoryEnsemble coarse = subsample(e, level);
  return means_with_reseed(ensemble_view(coarse), labels, k);
}

AdaptiveResult adaptive_wcve(const TrajectoryEnsemble& e, std::size_t k,
                             const AdaptivePlan& plan, std::uint64_t seed,
                             const WcveOptions& opts, unsigned threads) {
  if (plan.deepest_level < 1)
    throw ConfigError("adaptive: deepest level N must be >= 1");
  if (e.time.n % (std::size_t{1} << plan.deepest_level) != 0)
    throw ConfigError("adaptive: n must be divisible by 2^N");
  if (k > e.size()) throw ConfigError("adaptive: k exceeds the trajectory count");

  KMeansConfig cfg;
  cfg.k = k;
  cfg.seed = seed;
  cfg.threads = threads;

  AdaptiveResult result;

  // Cold start at the coarsest level, then warm-started descent.
  cfg.max_iterations = plan.coarse_max_iterations;
  TrajectoryEnsemble coarse = subsample(e, plan.deepest_level);
  Clustering current = kmeans(ensemble_view(coarse), cfg);
  result.trace.push_back(
      record_stage("level-" + std::to_string(plan.deepest_level), current));
  result.assignment_ops += current.assignment_ops;

  for (unsigned m = plan.deepest_level; m-- > 0;) {
    TrajectoryEnsemble level = subsample(e, m);
    DataView view = ensemble_view(level);
    std::vector<double> centroids = means_with_reseed(view, current.labels, k);
    cfg.max_iterations =
        m >= 1 ? plan.coarse_max_iterations : plan.final_max_iterations;
    current = kmeans_warm(view, std::move(centroids), cfg);
    result.trace.push_back(record_stage("level-" + std::to_string(m), current));
    result.assignment_ops += current.assignment_ops;
  }

  result.field = wcve_field(e, current, opts);
  result.clustering = std::move(current);
  return result;
}

OnTheFlyState onthefly_start(const TrajectoryEnsemble& e, std::size_t z0,
                             const KMeansConfig& cfg) {
  if (z0 < 1 || z0 > e.time.n)
    throw ConfigError("on-the-fly: z0 must satisfy 1 <= z0 <= n");
  OnTheFlyState s;
  s.z = z0;
  s.clustering = kmeans(prefix_view(e, z0), cfg);
  s.trace.push_back(record_stage("z=" + std::to_string(z0), s.clustering));
  s.assignment_ops = s.clustering.assignment_ops;
  return s;
}

OnTheFlyState onthefly_advance(OnTheFlyState s, const TrajectoryEnsemble& e,
                               std::size_t alpha, const KMeansConfig& cfg) {
  if (alpha < 1) throw ConfigError("on-the-fly: alpha must be >= 1");
  if (s.z + alpha > e.time.n)
    throw ConfigError("on-the-fly: advance past n");
  std::size_t z_new = s.z + alpha;
  DataView view = prefix_view(e, z_new);
  std::vector<double> centroids =
      means_with_reseed(view, s.clustering.labels, cfg.k);
  s.clustering = kmeans_warm(view, std::move(centroids), cfg);
  s.z = z_new;
  s.alpha = alpha;
  s.trace.push_back(record_stage("z=" + std::to_string(z_new), s.clustering));
  s.assignment_ops += s.clustering.assignment_ops;
  return s;
}

OnTheFlyState retarget_interval(OnTheFlyState s, const TrajectoryEnsemble& e,
                                std::size_t z_new, const KMeansConfig& cfg) {
  if (z_new < 1 || z_new > e.time.n)
    throw ConfigError("retarget: z must satisfy 1 <= z <= n");
  if (z_new == s.z) return s;
  if (z_new > s.z) return onthefly_advance(std::move(s), e, z_new - s.z, cfg);
  DataView view = prefix_view(e, z_new);
  std::vector<double> centroids =
      means_with_reseed(view, s.clustering.labels, cfg.k);
  s.clustering = kmeans_warm(view, std::move(centroids), cfg);
  s.z = z_new;
  s.trace.push_back(record_stage("shrink-z=" + std::to_string(z_new), s.clustering));
  s.assignment_ops += s.clustering.assignment_ops;
  return s;
}

ScalarField onthefly_field(const OnTheFlyState& s, const TrajectoryEnsemble& e,
                           const WcveOptions& opts) {
  if (s.z == e.time.n) return wcve_field(e, s.clustering, opts);
  return wcve_field(prefix(e, s.z), s.clustering, opts);
}

}  // namespace cohflow
