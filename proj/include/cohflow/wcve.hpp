#pragma once

#include <span>

#include "cohflow/kmeans.hpp"
#include "cohflow/scalar_field.hpp"

namespace cohflow {

enum class WcveVariant { SD, MAD };

struct WcveOptions {
  WcveVariant variant = WcveVariant::SD;
};

// ln[ sqrt( sum ||X - m||^2 / (card-1) ) / (n+1) ]; NaN sentinel for
// singleton clusters and zero spread.
double cluster_sd_value(const DataView& members, std::span<const double> centroid,
                        std::size_t n);

// ln[ (1/card) sum ||X - m|| / (n+1) ]; NaN sentinel for zero spread.
double cluster_mad_value(const DataView& members, std::span<const double> centroid,
                         std::size_t n);

// Assigns each grid node the variability exponent of its trajectory's
// cluster. One pass over the data, independent of k.
ScalarField wcve_field(const TrajectoryEnsemble& e, const Clustering& c,
                       const WcveOptions& opts = {});

}  // namespace cohflow
