#include "cohflow/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "cohflow/errors.hpp"
#include "cohflow/parallel.hpp"

namespace cohflow {

DataView ensemble_view(const TrajectoryEnsemble& e) {
  return {e.data.data(), e.size(), e.feature_length(), e.feature_length()};
}

DataView prefix_view(const TrajectoryEnsemble& e, std::size_t z) {
  if (z > e.time.n) throw ConfigError("prefix_view: z exceeds n");
  return {e.data.data(), e.size(), TrajectoryEnsemble::dim * (z + 1),
          e.feature_length()};
}

void KMeansConfig::validate(std::size_t rows) const {
  if (k < 1) throw ConfigError("kmeans: k must be >= 1");
  if (k > rows) throw ConfigError("kmeans: k exceeds the number of data points");
  if (max_iterations < 1) throw ConfigError("kmeans: max_iterations must be >= 1");
  if (restarts < 1) throw ConfigError("kmeans: restarts must be >= 1");
}

namespace {

double dist_sq(std::span<const double> a, const double* b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

double wcss(const DataView& data, std::span<const std::uint32_t> labels,
            std::span<const double> centroids, std::size_t k) {
  if (labels.size() != data.rows || centroids.size() != k * data.cols)
    throw ConfigError("wcss: shape mismatch");
  double total = 0.0;
  for (std::size_t j = 0; j < data.rows; ++j)
    total += dist_sq(data.row(j), centroids.data() + labels[j] * data.cols);
  return total;
}

void assign(const DataView& data, std::span<const double> centroids,
            std::size_t k, std::span<std::uint32_t> labels,
            std::span<double> min_dist_sq, unsigned threads) {
  parallel_for(
      data.rows,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j < hi; ++j) {
          auto point = data.row(j);
          std::uint32_t best = 0;
          double best_d = std::numeric_limits<double>::infinity();
          for (std::size_t l = 0; l < k; ++l) {
            double d = dist_sq(point, centroids.data() + l * data.cols);
            if (d < best_d) {
              best_d = d;
              best = static_cast<std::uint32_t>(l);
            }
          }
          labels[j] = best;
          if (!min_dist_sq.empty()) min_dist_sq[j] = best_d;
        }
      },
      threads);
}

namespace {

// Means per cluster plus the empty-cluster reseed. Returns true when a
// reseed happened (labels were modified).
bool update_impl(const DataView& data, std::span<std::uint32_t> labels,
                 std::size_t k, std::vector<double>& centroids) {
  const std::size_t p = data.cols;
  centroids.assign(k * p, 0.0);
  std::vector<std::size_t> card(k, 0);
  for (std::size_t j = 0; j < data.rows; ++j) {
    auto point = data.row(j);
    double* c = centroids.data() + labels[j] * p;
    for (std::size_t i = 0; i < p; ++i) c[i] += point[i];
    ++card[labels[j]];
  }
  for (std::size_t l = 0; l < k; ++l)
    if (card[l] > 0) {
      double inv = 1.0 / static_cast<double>(card[l]);
      double* c = centroids.data() + l * p;
      for (std::size_t i = 0; i < p; ++i) c[i] *= inv;
    }

  bool repaired = false;
  for (std::size_t l = 0; l < k; ++l) {
    if (card[l] > 0) continue;
    // Give the empty cluster the point farthest from its own centroid,
    // drawn from clusters that keep at least one member.
    std::size_t worst = data.rows;
    double worst_d = -1.0;
    for (std::size_t j = 0; j < data.rows; ++j) {
      if (card[labels[j]] < 2) continue;
      double d = dist_sq(data.row(j), centroids.data() + labels[j] * p);
      if (d > worst_d) {
        worst_d = d;
        worst = j;
      }
    }
    if (worst == data.rows) continue;  // all clusters singleton; leave empty
    std::uint32_t old = labels[worst];
    auto point = data.row(worst);
    std::copy(point.begin(), point.end(), centroids.begin() + l * p);
    labels[worst] = static_cast<std::uint32_t>(l);
    card[l] = 1;
    --card[old];
    // Recompute the donor's mean over its remaining members.
    double* c = centroids.data() + old * p;
    std::fill(c, c + p, 0.0);
    for (std::size_t j = 0; j < data.rows; ++j) {
      if (labels[j] != old) continue;
      auto row = data.row(j);
      for (std::size_t i = 0; i < p; ++i) c[i] += row[i];
    }
    double inv = 1.0 / static_cast<double>(card[old]);
    for (std::size_t i = 0; i < p; ++i) c[i] *= inv;
    repaired = true;
  }
  return repaired;
}

Clustering lloyd(const DataView& data, std::vector<double> centroids,
                 const KMeansConfig& cfg, std::uint64_t seed_used) {
  Clustering result;
  result.k = cfg.k;
  result.cols = data.cols;
  result.seed = seed_used;
  result.labels.assign(data.rows, 0);

  std::vector<std::uint32_t> new_labels(data.rows);
  std::vector<double> dists(data.rows);
  bool first = true;
  for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
    assign(data, centroids, cfg.k, new_labels, dists, cfg.threads);
    result.assignment_ops +=
        static_cast<std::uint64_t>(data.rows) * cfg.k * data.cols;
    ++result.iterations;
    result.wcss_history.push_back(
        std::accumulate(dists.begin(), dists.end(), 0.0));
    bool changed = first || new_labels != result.labels;
    result.labels = new_labels;
    first = false;
    bool repaired = update_impl(data, std::span(result.labels), cfg.k, centroids);
    if (!changed && !repaired) break;
  }
  result.centroids = std::move(centroids);
  result.wcss = wcss(data, result.labels, result.centroids, cfg.k);
  result.wcss_history.push_back(result.wcss);
  return result;
}

std::vector<double> random_points_init(const DataView& data, std::size_t k,
                                       std::uint64_t seed) {
  // Partial Fisher-Yates over the row indices; avoids the
  // implementation-defined behavior of std::sample / distributions so the
  // draw is identical on every platform.
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(data.rows);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<double> centroids(k * data.cols);
  for (std::size_t l = 0; l < k; ++l) {
    std::size_t pick = l + static_cast<std::size_t>(rng() % (data.rows - l));
    std::swap(idx[l], idx[pick]);
    auto row = data.row(idx[l]);
    std::copy(row.begin(), row.end(), centroids.begin() + l * data.cols);
  }
  return centroids;
}

}  // namespace

std::vector<double> update(const DataView& data, std::span<std::uint32_t> labels,
                           std::size_t k) {
  for (std::uint32_t l : labels)
    if (l >= k) throw ConfigError("update: label out of range");
  std::vector<double> centroids;
  update_impl(data, labels, k, centroids);
  return centroids;
}

Clustering kmeans(const DataView& data, const KMeansConfig& cfg) {
  cfg.validate(data.rows);
  if (cfg.init != InitMode::RandomPoints)
    throw ConfigError("kmeans: seeded-centroids init requires kmeans_warm");
  Clustering best;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    std::uint64_t seed = cfg.seed + r;
    Clustering run = lloyd(data, random_points_init(data, cfg.k, seed), cfg, seed);
    if (r == 0 || run.wcss < best.wcss) best = std::move(run);
  }
  return best;
}

Clustering kmeans_warm(const DataView& data, std::vector<double> centroids0,
                       const KMeansConfig& cfg) {
  cfg.validate(data.rows);
  if (centroids0.size() != cfg.k * data.cols)
    throw ConfigError("kmeans_warm: centroid matrix shape mismatch");
  return lloyd(data, std::move(centroids0), cfg, cfg.seed);
}

}  // namespace cohflow
