#include <CLI11.hpp>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rasim/config.hpp"
#include "rasim/engine.hpp"
#include "rasim/report.hpp"

namespace fs = std::filesystem;
using namespace rasim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path resolve_out_dir(const std::string& cli_out, const char* fallback) {
  if (!cli_out.empty()) {
    return cli_out;
  }
  if (const char* env = std::getenv("RA_SIM_OUT"); env != nullptr && env[0] != '\0') {
    return env;
  }
  return fallback;
}

ConfigTable load_table(const std::string& config_path) {
  if (!fs::exists(config_path)) {
    throw IoError("config file not found: " + config_path);
  }
  return load_config_file(config_path);
}

ScenarioConfig decode_or_fail(const ConfigTable& table) {
  std::vector<std::string> errors;
  ScenarioConfig cfg = decode_scenario(table, errors);
  if (!errors.empty()) {
    std::cerr << "invalid config:\n";
    for (const std::string& e : errors) {
      std::cerr << "  " << e << "\n";
    }
    std::exit(kExitValidation);
  }
  return cfg;
}

void apply_cli_overrides(ConfigTable& table, const std::vector<std::string>& sets,
                         std::optional<long> seed) {
  for (const std::string& s : sets) {
    apply_override(table, s);
  }
  if (seed.has_value()) {
    apply_override(table, "seed=" + std::to_string(*seed));
  }
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

template <typename WriteFn>
void write_stream_file(const fs::path& path, WriteFn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  fn(out);
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

int cmd_run(const std::string& config_path, const std::string& out_opt,
            const std::vector<std::string>& sets, std::optional<long> seed, bool dump_detections,
            bool dump_tracks) {
  ConfigTable table = load_table(config_path);
  apply_cli_overrides(table, sets, seed);
  const ScenarioConfig cfg = decode_or_fail(table);

  RunOptions options;
  options.log_detections = dump_detections;
  options.log_tracks = dump_tracks;
  const std::string started_at = current_timestamp_utc();
  const RunResult result = run_scenario(cfg, options);
  const Summary summary = summarize(result.records);

  const fs::path out_dir = resolve_out_dir(out_opt, "ra_sim_out");
  fs::create_directories(out_dir);
  std::vector<std::string> files;
  write_stream_file(out_dir / "records.csv",
                    [&](std::ostream& os) { write_records_csv(os, result.records); });
  files.push_back("records.csv");
  write_text_file(out_dir / "summary.txt", summary_text(summary));
  files.push_back("summary.txt");
  if (dump_detections) {
    write_stream_file(out_dir / "detections.csv",
                      [&](std::ostream& os) { write_detections_csv(os, result.detection_log); });
    files.push_back("detections.csv");
  }
  if (dump_tracks) {
    write_stream_file(out_dir / "tracks.csv",
                      [&](std::ostream& os) { write_tracks_csv(os, result.track_log); });
    files.push_back("tracks.csv");
  }
  write_manifest(out_dir, config_path, cfg.seed, started_at, files);

  std::cout << "wrote " << (out_dir / "records.csv").string() << " (" << result.records.size()
            << " ticks, " << result.camera_frames << " camera frames)\n";
  std::cout << summary_text(summary);
  return kExitOk;
}

int cmd_compare(const std::string& config_path, const std::string& out_opt,
                const std::vector<std::string>& sets, std::optional<long> seed) {
  ConfigTable table = load_table(config_path);
  apply_cli_overrides(table, sets, seed);
  const ScenarioConfig cfg = decode_or_fail(table);

  const std::string started_at = current_timestamp_utc();
  const CompareResult result = compare_modes(cfg);

  const fs::path out_dir = resolve_out_dir(out_opt, "ra_sim_out");
  fs::create_directories(out_dir);
  std::vector<std::string> files;
  write_stream_file(out_dir / "compare.csv",
                    [&](std::ostream& os) { write_compare_csv(os, result); });
  files.push_back("compare.csv");
  write_text_file(out_dir / "summary.txt", compare_summary_text(result));
  files.push_back("summary.txt");
  write_stream_file(out_dir / "plot.svg",
                    [&](std::ostream& os) { write_compare_svg(os, result); });
  files.push_back("plot.svg");
  write_manifest(out_dir, config_path, cfg.seed, started_at, files);

  std::cout << "wrote " << (out_dir / "compare.csv").string() << " (" << result.rows.size()
            << " ticks)\n";
  std::cout << compare_summary_text(result);
  return kExitOk;
}

int cmd_validate(const std::string& config_path) {
  ConfigTable table = load_table(config_path);
  std::vector<std::string> errors;
  const ScenarioConfig cfg = decode_scenario(table, errors);
  if (!errors.empty()) {
    std::cerr << "invalid config:\n";
    for (const std::string& e : errors) {
      std::cerr << "  " << e << "\n";
    }
    return kExitValidation;
  }
  std::cout << render_effective_config(cfg);
  return kExitOk;
}

struct GridSpec {
  std::string key;
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;
};

GridSpec parse_grid(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("--grid must have the form key=start:stop:steps");
  }
  GridSpec grid;
  grid.key = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw ConfigError("--grid must have the form key=start:stop:steps");
  }
  try {
    grid.start = std::stod(rest.substr(0, c1));
    grid.stop = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
    grid.steps = std::stoi(rest.substr(c2 + 1));
  } catch (const std::logic_error&) {
    throw ConfigError("--grid: malformed numbers in '" + rest + "'");
  }
  if (grid.steps < 1) {
    throw ConfigError("--grid: steps must be >= 1");
  }
  return grid;
}

int cmd_sweep(const std::string& config_path, const std::string& out_opt,
              const std::vector<std::string>& sets, std::optional<long> seed,
              const std::string& grid_text, int jobs) {
  const GridSpec grid = parse_grid(grid_text);
  ConfigTable base_table = load_table(config_path);
  apply_cli_overrides(base_table, sets, seed);

  std::vector<double> values(grid.steps);
  for (int i = 0; i < grid.steps; ++i) {
    values[i] = grid.steps == 1
                    ? grid.start
                    : grid.start + (grid.stop - grid.start) * i / (grid.steps - 1);
  }

  // Validate every grid point up front so a bad grid fails before any work.
  std::vector<ScenarioConfig> configs;
  for (const double v : values) {
    ConfigTable t = base_table;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    apply_override(t, grid.key + "=" + buf);
    configs.push_back(decode_or_fail(t));
  }

  const std::string started_at = current_timestamp_utc();
  const fs::path out_dir = resolve_out_dir(out_opt, "ra_sim_sweep");
  fs::create_directories(out_dir);

  std::vector<Summary> summaries(configs.size());
  std::vector<std::vector<StepRecord>> all_records(configs.size());
  const int n_jobs = std::max(1, jobs);
  std::vector<std::thread> workers;
  std::atomic<std::size_t> next{0};
  for (int w = 0; w < n_jobs; ++w) {
    workers.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= configs.size()) {
          return;
        }
        RunResult r = run_scenario(configs[i]);
        summaries[i] = summarize(r.records);
        all_records[i] = std::move(r.records);
      }
    });
  }
  for (std::thread& t : workers) {
    t.join();
  }

  std::vector<std::string> files;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "point_%03zu", i);
    fs::create_directories(out_dir / name);
    const std::string rec_rel = std::string(name) + "/records.csv";
    const std::string sum_rel = std::string(name) + "/summary.txt";
    write_stream_file(out_dir / rec_rel,
                      [&](std::ostream& os) { write_records_csv(os, all_records[i]); });
    write_text_file(out_dir / sum_rel, summary_text(summaries[i]));
    files.push_back(rec_rel);
    files.push_back(sum_rel);
  }

  std::ostringstream index;
  index << "point," << grid.key << ",prx_mean_dbm,prx_min_dbm,prx_max_dbm,pointing_p95_rad,"
        << "tracking_fraction\n";
  for (std::size_t i = 0; i < configs.size(); ++i) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", i, values[i],
                  summaries[i].prx_mean_dbm, summaries[i].prx_min_dbm, summaries[i].prx_max_dbm,
                  summaries[i].pointing_p95_rad, summaries[i].tracking_fraction);
    index << buf;
  }
  write_text_file(out_dir / "index.csv", index.str());
  files.push_back("index.csv");
  write_manifest(out_dir, config_path, configs.empty() ? 0 : configs[0].seed, started_at, files);

  std::cout << "wrote " << (out_dir / "index.csv").string() << " (" << configs.size()
            << " points)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotatable-antenna link simulator"};
  app.set_version_flag("--version", std::string("ra-sim ") + kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;
  std::optional<long> seed;
  bool dump_detections = false;
  bool dump_tracks = false;
  std::string grid_text;
  int jobs = 1;

  CLI::App* run = app.add_subcommand("run", "Run one scenario and write records.csv");
  run->add_option("config", config_path, "Scenario config file")->required();
  run->add_option("--out", out_dir, "Output directory (default $RA_SIM_OUT or ./ra_sim_out)");
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--set", sets, "Override a config key, e.g. --set camera.hfov_deg=90");
  run->add_flag("--dump-detections", dump_detections, "Also write detections.csv");
  run->add_flag("--dump-tracks", dump_tracks, "Also write tracks.csv");

  CLI::App* compare = app.add_subcommand(
      "compare", "Run rotatable vs fixed orientation on the same scenario and seed");
  compare->add_option("config", config_path, "Scenario config file")->required();
  compare->add_option("--out", out_dir, "Output directory");
  compare->add_option("--seed", seed, "Override the scenario seed");
  compare->add_option("--set", sets, "Override a config key");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a config and print the effective values");
  validate_cmd->add_option("config", config_path, "Scenario config file")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "Run a scenario over a parameter grid");
  sweep->add_option("config", config_path, "Scenario config file")->required();
  sweep->add_option("--grid", grid_text, "Grid spec: key=start:stop:steps")->required();
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--seed", seed, "Override the scenario seed");
  sweep->add_option("--set", sets, "Override a config key");
  sweep->add_option("--jobs", jobs, "Parallel scenario runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, out_dir, sets, seed, dump_detections, dump_tracks);
    }
    if (compare->parsed()) {
      return cmd_compare(config_path, out_dir, sets, seed);
    }
    if (validate_cmd->parsed()) {
      return cmd_validate(config_path);
    }
    if (sweep->parsed()) {
      return cmd_sweep(config_path, out_dir, sets, seed, grid_text, jobs);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
