#include "cohflow/run.hpp"

#include <chrono>
#include <fstream>

#include <json.hpp>

#include "cohflow/errors.hpp"
#include "cohflow/ftle.hpp"
#include "cohflow/io.hpp"
#include "cohflow/schedules.hpp"

namespace cohflow {

using nlohmann::json;

std::string task_name(Task t) {
  switch (t) {
    case Task::Ftle: return "ftle";
    case Task::Wcve: return "wcve";
    case Task::Adaptive: return "adaptive";
    case Task::OnTheFly: return "onthefly";
  }
  return "wcve";
}

Task task_from_name(const std::string& name) {
  if (name == "ftle") return Task::Ftle;
  if (name == "wcve") return Task::Wcve;
  if (name == "adaptive") return Task::Adaptive;
  if (name == "onthefly") return Task::OnTheFly;
  throw ConfigError("task: expected one of ftle|wcve|adaptive|onthefly, got \"" +
                    name + "\"");
}

std::size_t RunConfig::validate_and_adjust() {
  grid.validate();
  time.validate();
  if (field_name.empty()) throw ConfigError("field: name is required");
  if (task != Task::Ftle) {
    if (k < 1) throw ConfigError("k: required and must be >= 1 for this task");
    if (k > grid.node_count())
      throw ConfigError("k: exceeds the trajectory count M = " +
                        std::to_string(grid.node_count()));
  }
  if (task == Task::Adaptive && adaptive_levels < 1)
    throw ConfigError("N: adaptive task requires N >= 1");
  if (task == Task::OnTheFly) {
    if (alpha < 1) throw ConfigError("alpha: on-the-fly task requires alpha >= 1");
    if (z0 > time.n) throw ConfigError("z0: exceeds n");
  }
  if (max_iterations < 1) throw ConfigError("max_iterations: must be >= 1");
  if (restarts < 1) throw ConfigError("restarts: must be >= 1");

  std::size_t original_n = 0;
  if (task == Task::Adaptive) {
    std::size_t stride = std::size_t{1} << adaptive_levels;
    if (time.n % stride != 0) {
      original_n = time.n;
      time.n = ((time.n / stride) + 1) * stride;
    }
  }
  return original_n;
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) { known = true; break; }
    if (!known)
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

double require_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key))
    throw ConfigError("missing key \"" + std::string(key) + "\" in " + where);
  if (!obj[key].is_number())
    throw ConfigError(std::string(key) + ": expected a number in " + where);
  return obj[key].get<double>();
}

RunConfig from_json(const json& j) {
  RunConfig cfg;
  reject_unknown(j, {"field", "grid", "time", "task", "k", "N", "alpha", "z0",
                     "variant", "seed", "max_iterations", "restarts", "threads",
                     "out", "export"},
                 "config");

  if (!j.contains("field") || !j["field"].is_object())
    throw ConfigError("field: object required");
  const json& field = j["field"];
  if (!field.contains("name") || !field["name"].is_string())
    throw ConfigError("field.name: string required");
  cfg.field_name = field["name"].get<std::string>();
  for (auto it = field.begin(); it != field.end(); ++it) {
    if (it.key() == "name") continue;
    if (!it.value().is_number())
      throw ConfigError("field." + it.key() + ": expected a numeric parameter");
    cfg.field_params[it.key()] = it.value().get<double>();
  }

  if (!j.contains("grid") || !j["grid"].is_object())
    throw ConfigError("grid: object required");
  const json& grid = j["grid"];
  reject_unknown(grid, {"xmin", "xmax", "ymin", "ymax", "dx", "dy"}, "grid");
  cfg.grid.xmin = require_number(grid, "xmin", "grid");
  cfg.grid.xmax = require_number(grid, "xmax", "grid");
  cfg.grid.ymin = require_number(grid, "ymin", "grid");
  cfg.grid.ymax = require_number(grid, "ymax", "grid");
  cfg.grid.dx = require_number(grid, "dx", "grid");
  cfg.grid.dy = grid.contains("dy") ? require_number(grid, "dy", "grid") : cfg.grid.dx;

  if (!j.contains("time") || !j["time"].is_object())
    throw ConfigError("time: object required");
  const json& time = j["time"];
  reject_unknown(time, {"t0", "dt", "n", "T"}, "time");
  cfg.time.t0 = time.contains("t0") ? require_number(time, "t0", "time") : 0.0;
  cfg.time.dt = require_number(time, "dt", "time");
  if (!(cfg.time.dt > 0.0)) throw ConfigError("dt: must be > 0");
  if (time.contains("n") == time.contains("T"))
    throw ConfigError("time: exactly one of n or T is required");
  if (time.contains("n")) {
    double n = require_number(time, "n", "time");
    if (n < 1 || n != std::floor(n)) throw ConfigError("n: must be a positive integer");
    cfg.time.n = static_cast<std::size_t>(n);
  } else {
    double horizon = require_number(time, "T", "time");
    if (!(horizon > 0.0)) throw ConfigError("T: must be > 0");
    cfg.time.n = static_cast<std::size_t>(std::llround(horizon / cfg.time.dt));
    if (cfg.time.n < 1) throw ConfigError("T: shorter than one time step dt");
  }

  if (j.contains("task")) cfg.task = task_from_name(j["task"].get<std::string>());
  if (j.contains("k")) cfg.k = j["k"].get<std::size_t>();
  if (j.contains("N")) cfg.adaptive_levels = j["N"].get<unsigned>();
  if (j.contains("alpha")) cfg.alpha = j["alpha"].get<std::size_t>();
  if (j.contains("z0")) cfg.z0 = j["z0"].get<std::size_t>();
  if (j.contains("variant")) {
    std::string v = j["variant"].get<std::string>();
    if (v == "SD") cfg.variant = WcveVariant::SD;
    else if (v == "MAD") cfg.variant = WcveVariant::MAD;
    else throw ConfigError("variant: expected SD or MAD");
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("max_iterations"))
    cfg.max_iterations = j["max_iterations"].get<std::size_t>();
  if (j.contains("restarts")) cfg.restarts = j["restarts"].get<std::size_t>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<unsigned>();
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
  if (j.contains("export")) {
    const json& ex = j["export"];
    reject_unknown(ex, {"ensemble", "csv", "pgm", "clustering", "trace"}, "export");
    if (ex.contains("ensemble")) cfg.exports.ensemble = ex["ensemble"].get<bool>();
    if (ex.contains("csv")) cfg.exports.csv = ex["csv"].get<bool>();
    if (ex.contains("pgm")) cfg.exports.pgm = ex["pgm"].get<bool>();
    if (ex.contains("clustering")) cfg.exports.clustering = ex["clustering"].get<bool>();
    if (ex.contains("trace")) cfg.exports.trace = ex["trace"].get<bool>();
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json field = {{"name", cfg.field_name}};
  for (const auto& [key, value] : cfg.field_params) field[key] = value;
  return json{
      {"field", field},
      {"grid",
       {{"xmin", cfg.grid.xmin}, {"xmax", cfg.grid.xmax}, {"ymin", cfg.grid.ymin},
        {"ymax", cfg.grid.ymax}, {"dx", cfg.grid.dx}, {"dy", cfg.grid.dy}}},
      {"time", {{"t0", cfg.time.t0}, {"dt", cfg.time.dt}, {"n", cfg.time.n}}},
      {"task", task_name(cfg.task)},
      {"k", cfg.k},
      {"N", cfg.adaptive_levels},
      {"alpha", cfg.alpha},
      {"z0", cfg.z0},
      {"variant", cfg.variant == WcveVariant::MAD ? "MAD" : "SD"},
      {"seed", cfg.seed},
      {"max_iterations", cfg.max_iterations},
      {"restarts", cfg.restarts},
      {"threads", cfg.threads},
      {"out", cfg.out_dir},
      {"export",
       {{"ensemble", cfg.exports.ensemble}, {"csv", cfg.exports.csv},
        {"pgm", cfg.exports.pgm}, {"clustering", cfg.exports.clustering},
        {"trace", cfg.exports.trace}}}};
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config parse error: ") + err.what());
  }
  // A manifest embeds the resolved config; accept it for exact re-runs.
  if (j.is_object() && j.contains("config")) j = j["config"];
  return from_json(j);
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::filesystem::path run(RunConfig cfg) {
  std::size_t original_n = cfg.validate_and_adjust();
  VelocityField field = make_field(cfg.field_name, cfg.field_params);

  std::filesystem::path out(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory: " + out.string());

  json timings;
  json artifacts = json::array();
  auto note = [&](const std::filesystem::path& p) {
    artifacts.push_back(p.filename().string());
  };

  auto t_start = std::chrono::steady_clock::now();
  TrajectoryEnsemble ensemble =
      build_ensemble(field, cfg.grid, cfg.time, cfg.threads);
  timings["advect_s"] = seconds_since(t_start);

  if (cfg.exports.ensemble) {
    write_ensemble(ensemble, out / "ensemble.bin");
    note(out / "ensemble.bin");
  }

  KMeansConfig kcfg;
  kcfg.k = cfg.k;
  kcfg.max_iterations = cfg.max_iterations;
  kcfg.seed = cfg.seed;
  kcfg.restarts = cfg.restarts;
  kcfg.threads = cfg.threads;
  WcveOptions wopts{cfg.variant};

  ScalarField result_field;
  std::vector<StageRecord> trace;
  Clustering clustering;
  bool have_clustering = false;
  bool clamp_negative_image = false;

  auto t_task = std::chrono::steady_clock::now();
  switch (cfg.task) {
    case Task::Ftle: {
      FlowMapGrid fm = flow_map_from_ensemble(ensemble);
      result_field = ftle_field(fm, ensemble.time.horizon(), cfg.threads);
      clamp_negative_image = true;  // image-only, per the reference figures
      break;
    }
    case Task::Wcve: {
      clustering = kmeans(ensemble_view(ensemble), kcfg);
      result_field = wcve_field(ensemble, clustering, wopts);
      trace.push_back({"full", clustering.wcss_history, clustering.iterations,
                       clustering.assignment_ops});
      have_clustering = true;
      break;
    }
    case Task::Adaptive: {
      AdaptivePlan plan;
      plan.deepest_level = cfg.adaptive_levels;
      plan.final_max_iterations = cfg.max_iterations;
      AdaptiveResult res =
          adaptive_wcve(ensemble, cfg.k, plan, cfg.seed, wopts, cfg.threads);
      result_field = std::move(res.field);
      trace = std::move(res.trace);
      clustering = std::move(res.clustering);
      have_clustering = true;
      break;
    }
    case Task::OnTheFly: {
      std::size_t z0 = cfg.z0 ? cfg.z0 : std::min(cfg.alpha, cfg.time.n);
      KMeansConfig stage_cfg = kcfg;
      stage_cfg.max_iterations = std::min<std::size_t>(kcfg.max_iterations, 20);
      OnTheFlyState state = onthefly_start(
          ensemble, z0, z0 == cfg.time.n ? kcfg : stage_cfg);
      while (state.z < cfg.time.n) {
        std::size_t step = std::min(cfg.alpha, cfg.time.n - state.z);
        bool final_stage = state.z + step == cfg.time.n;
        state = onthefly_advance(std::move(state), ensemble, step,
                                 final_stage ? kcfg : stage_cfg);
      }
      result_field = onthefly_field(state, ensemble, wopts);
      trace = std::move(state.trace);
      clustering = std::move(state.clustering);
      have_clustering = true;
      break;
    }
  }
  timings["task_s"] = seconds_since(t_task);

  if (cfg.exports.csv) {
    export_field_csv(result_field, out / "field.csv");
    note(out / "field.csv");
  }
  if (cfg.exports.pgm) {
    export_field_pgm(result_field, out / "field.pgm", clamp_negative_image);
    note(out / "field.pgm");
  }
  if (have_clustering && cfg.exports.clustering) {
    write_clustering(clustering, out / "clustering.bin");
    note(out / "clustering.bin");
  }
  if (!trace.empty() && cfg.exports.trace) {
    write_wcss_trace_csv(trace, out / "wcss_trace.csv");
    note(out / "wcss_trace.csv");
  }

  json manifest = {{"config", to_json(cfg)},
                   {"timings", timings},
                   {"artifacts", artifacts}};
  if (original_n != 0) manifest["n_adjusted_from"] = original_n;
  std::ofstream mout(out / "manifest.json");
  if (!mout) throw IoError("cannot write manifest");
  mout << manifest.dump(2) << "\n";
  return out;
}

}  // namespace cohflow
