#pragma once

#include <filesystem>
#include <vector>

#include "cohflow/kmeans.hpp"
#include "cohflow/scalar_field.hpp"
#include "cohflow/schedules.hpp"

namespace cohflow {

// Flat little-endian binary ensemble: fixed 96-byte header (magic,
// version, d, n, M, grid bounds, dx, dy, t0, dt) followed by
// M * d * (n+1) IEEE-754 doubles in the frozen time-major order.
void write_ensemble(const TrajectoryEnsemble& e, const std::filesystem::path& path);
TrajectoryEnsemble read_ensemble(const std::filesystem::path& path);

// Human-readable export for small cases: one row per trajectory.
void write_ensemble_csv(const TrajectoryEnsemble& e,
                        const std::filesystem::path& path);

// Labels as a flat integer array plus the centroid matrix, same binary
// conventions as the ensemble format.
void write_clustering(const Clustering& c, const std::filesystem::path& path);
Clustering read_clustering(const std::filesystem::path& path);

// Header row (nx, ny, bounds, quantity, time interval), then row-major
// values; the sentinel becomes an empty cell. Round-trips to machine
// precision.
void export_field_csv(const ScalarField& f, const std::filesystem::path& path);
ScalarField import_field_csv(const std::filesystem::path& path);

// 16-bit grayscale PGM, linear map [min_finite, max_finite] -> [0, 65535],
// sentinel mapped to 0. clamp_negative replaces negative values by 0
// before scaling (image-only; the field itself is never clamped).
void export_field_pgm(const ScalarField& f, const std::filesystem::path& path,
                      bool clamp_negative = false);

// Per-stage WCSS traces with labeled stage boundaries.
void write_wcss_trace_csv(const std::vector<StageRecord>& trace,
                          const std::filesystem::path& path);

}  // namespace cohflow
