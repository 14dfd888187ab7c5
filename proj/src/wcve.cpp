#include "cohflow/wcve.hpp"

#include <cmath>
#include <vector>

#include "cohflow/errors.hpp"

namespace cohflow {

namespace {

double deviation_sq(std::span<const double> row, std::span<const double> centroid) {
  double acc = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    double diff = row[i] - centroid[i];
    acc += diff * diff;
  }
  return acc;
}

double sd_from_sums(double sum_sq, std::size_t card, std::size_t n) {
  if (card < 2 || !(sum_sq > 0.0)) return ScalarField::sentinel();
  double sd = std::sqrt(sum_sq / static_cast<double>(card - 1));
  return std::log(sd / static_cast<double>(n + 1));
}

double mad_from_sums(double sum_abs, std::size_t card, std::size_t n) {
  if (card < 1 || !(sum_abs > 0.0)) return ScalarField::sentinel();
  double mad = sum_abs / static_cast<double>(card);
  return std::log(mad / static_cast<double>(n + 1));
}

}  // namespace

double cluster_sd_value(const DataView& members, std::span<const double> centroid,
                        std::size_t n) {
  if (centroid.size() != members.cols)
    throw ConfigError("cluster_sd_value: centroid length mismatch");
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < members.rows; ++j)
    sum_sq += deviation_sq(members.row(j), centroid);
  return sd_from_sums(sum_sq, members.rows, n);
}

double cluster_mad_value(const DataView& members, std::span<const double> centroid,
                         std::size_t n) {
  if (centroid.size() != members.cols)
    throw ConfigError("cluster_mad_value: centroid length mismatch");
  double sum_abs = 0.0;
  for (std::size_t j = 0; j < members.rows; ++j)
    sum_abs += std::sqrt(deviation_sq(members.row(j), centroid));
  return mad_from_sums(sum_abs, members.rows, n);
}

ScalarField wcve_field(const TrajectoryEnsemble& e, const Clustering& c,
                       const WcveOptions& opts) {
  if (c.labels.size() != e.size())
    throw ConfigError("wcve_field: clustering M does not match the ensemble");
  if (c.cols != e.feature_length())
    throw ConfigError("wcve_field: clustering feature length does not match");

  // Single fixed-order pass; per-cluster sums, then one value per cluster.
  std::vector<double> sum_sq(c.k, 0.0);
  std::vector<double> sum_abs(c.k, 0.0);
  std::vector<std::size_t> card(c.k, 0);
  const DataView data = ensemble_view(e);
  const bool want_mad = opts.variant == WcveVariant::MAD;
  for (std::size_t j = 0; j < data.rows; ++j) {
    std::uint32_t l = c.labels[j];
    double dsq = deviation_sq(data.row(j), c.centroid(l));
    if (want_mad)
      sum_abs[l] += std::sqrt(dsq);
    else
      sum_sq[l] += dsq;
    ++card[l];
  }

  std::vector<double> value(c.k);
  for (std::size_t l = 0; l < c.k; ++l)
    value[l] = want_mad ? mad_from_sums(sum_abs[l], card[l], e.time.n)
                        : sd_from_sums(sum_sq[l], card[l], e.time.n);

  ScalarField field;
  field.grid = e.grid;
  field.quantity = want_mad ? "wcve-mad" : "wcve";
  field.t_begin = e.time.t0;
  field.t_end = e.time.time_at(e.time.n);
  field.values.resize(e.size());
  for (std::size_t j = 0; j < e.size(); ++j) field.values[j] = value[c.labels[j]];
  return field;
}

}  // namespace cohflow
