#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cohflow/advect.hpp"
#include "cohflow/field.hpp"
#include "cohflow/wcve.hpp"

namespace cohflow {

enum class Task { Ftle, Wcve, Adaptive, OnTheFly };

std::string task_name(Task t);
Task task_from_name(const std::string& name);

struct ExportToggles {
  bool ensemble = false;
  bool csv = true;
  bool pgm = true;
  bool clustering = true;
  bool trace = true;
};

struct RunConfig {
  std::string field_name;
  ParamMap field_params;
  GridSpec grid;
  TimeSpec time;
  Task task = Task::Wcve;
  std::size_t k = 0;
  unsigned adaptive_levels = 0;  // N (adaptive task)
  std::size_t alpha = 0;         // on-the-fly stride
  std::size_t z0 = 0;            // on-the-fly warm-up prefix; 0 = alpha
  WcveVariant variant = WcveVariant::SD;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 300;
  std::size_t restarts = 1;
  unsigned threads = 0;
  std::string out_dir = "out";
  ExportToggles exports;

  // Checks invariants that do not require integration (k <= M included).
  // For the adaptive task, bumps n up to the next multiple of 2^N and
  // returns the original n, or 0 when nothing changed.
  std::size_t validate_and_adjust();
};

// Parses a JSON run config (or a run manifest, recognized by its embedded
// "config" object). Unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

// Executes the configured pipeline and writes all artifacts plus a
// manifest that reproduces the run exactly. Returns the output directory.
std::filesystem::path run(RunConfig cfg);

}  // namespace cohflow
