// Command-line front end: run scenario configs, compare controllers
// under a shared plant, and benchmark controller step times.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aict/harness.hpp"
#include "aict/presets.hpp"
#include "aict/scenario_io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace aict;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDivergence = 2;
constexpr int kExitIo = 3;

// Atomic-per-file output: write a sibling temp file, then rename.
void write_file(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open " + tmp.string());
    out << content;
    if (!out.good()) throw std::ios_base::failure("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir)) {
    throw std::ios_base::failure("cannot create output directory " +
                                 dir.string());
  }
}

struct RunOutputs {
  TrajectoryLog log;
  Metrics metrics;
};

RunOutputs run_and_write(const Scenario& scenario, const fs::path& out_dir,
                         bool timing) {
  ensure_dir(out_dir);
  RunOutputs out;
  out.log = run(scenario);
  out.metrics = compute_metrics(out.log, scenario);

  std::ostringstream csv;
  write_trajectory_csv(out.log, csv, timing);
  write_file(out_dir / "trajectory.csv", csv.str());
  write_file(out_dir / "metrics.json", metrics_to_json(out.metrics) + "\n");
  write_file(out_dir / "summary.txt", metrics_summary(out.metrics, scenario));
  return out;
}

int cmd_run(const std::string& config, const std::string& out_dir,
            long long seed_override, double duration_override, bool timing) {
  Scenario scenario = load_scenario(config);
  if (seed_override >= 0) {
    scenario.noise.seed = static_cast<std::uint64_t>(seed_override);
  }
  if (duration_override >= 0.0) scenario.duration = duration_override;
  scenario.validate();

  const RunOutputs out = run_and_write(scenario, out_dir, timing);
  std::cout << metrics_summary(out.metrics, scenario);
  std::cout << "wrote " << (fs::path(out_dir) / "trajectory.csv").string()
            << ", metrics.json, summary.txt\n";
  if (out.log.diverged) {
    std::cerr << "run diverged: " << out.log.stop_reason << "\n";
    return kExitDivergence;
  }
  return kExitOk;
}

int cmd_compare(const std::string& config_a, const std::string& config_b,
                const std::string& out_dir) {
  const Scenario a = load_scenario(config_a);
  Scenario b = load_scenario(config_b);

  // Fairness: the comparison shares plant, schedule, noise seed, and
  // initial pose from the first config; the second contributes only its
  // controller choice and tuning.
  b.plant = a.plant;
  b.schedule = a.schedule;
  b.duration = a.duration;
  b.noise = a.noise;
  b.initial_q = a.initial_q;
  b.dt = a.dt;
  b.pushes = a.pushes;
  b.payload_events = a.payload_events;
  b.validate();

  const RunOutputs ra = run_and_write(a, fs::path(out_dir) / "a", false);
  const RunOutputs rb = run_and_write(b, fs::path(out_dir) / "b", false);

  std::ostringstream table;
  const auto label = [](const Scenario& s, const Metrics& m) {
    return to_string(s.controller) + " (" + s.name + ", " +
           std::to_string(m.tuning_parameters) + " params)";
  };
  table << "comparison under shared plant, schedule and noise seed "
        << a.noise.seed << "\n\n";
  char line[200];
  std::snprintf(line, sizeof(line), "%-34s %-34s\n", label(a, ra.metrics).c_str(),
                label(b, rb.metrics).c_str());
  table << line;
  std::snprintf(line, sizeof(line), "%-34s %-34s\n",
                ra.metrics.diverged ? "DIVERGED" : "completed",
                rb.metrics.diverged ? "DIVERGED" : "completed");
  table << line;

  const std::size_t segments =
      std::max(ra.metrics.segments.size(), rb.metrics.segments.size());
  for (std::size_t i = 0; i < segments; ++i) {
    const auto cell = [&](const Metrics& m) -> std::string {
      if (i >= m.segments.size()) return "-";
      const SegmentMetrics& s = m.segments[i];
      std::snprintf(line, sizeof(line), "settle %6.2fs%s sse %7.4f",
                    s.settling_time, s.settled ? " " : "*",
                    s.steady_state_error);
      return line;
    };
    std::string ca = cell(ra.metrics);
    std::string cb = cell(rb.metrics);
    std::snprintf(line, sizeof(line), "seg %zu: %-27s %-27s\n", i, ca.c_str(),
                  cb.c_str());
    table << line;
  }
  std::snprintf(line, sizeof(line), "jitter %-27.5f %-27.5f\n",
                ra.metrics.global.torque_jitter, rb.metrics.global.torque_jitter);
  table << line;
  std::snprintf(line, sizeof(line), "rmse   %-27.4f %-27.4f\n",
                ra.metrics.global.tracking_rmse, rb.metrics.global.tracking_rmse);
  table << line;

  nlohmann::ordered_json j;
  j["a"] = nlohmann::ordered_json::parse(metrics_to_json(ra.metrics));
  j["b"] = nlohmann::ordered_json::parse(metrics_to_json(rb.metrics));
  ensure_dir(out_dir);
  write_file(fs::path(out_dir) / "compare.txt", table.str());
  write_file(fs::path(out_dir) / "compare.json", j.dump(2) + "\n");

  std::cout << table.str();
  return kExitOk;
}

int cmd_bench(const std::vector<int>& dofs, int steps,
              const std::string& out_dir) {
  const TimingTable table = timing_benchmark(dofs, steps);

  std::ostringstream csv;
  csv << "controller,dofs,mean_us,p50_us,p99_us,max_us\n";
  char line[160];
  const auto emit = [&](const char* name, const TimingRow& row) {
    std::snprintf(line, sizeof(line), "%s,%d,%.9g,%.9g,%.9g,%.9g\n", name,
                  row.dofs, row.mean_us, row.p50_us, row.p99_us, row.max_us);
    csv << line;
  };
  for (const TimingRow& row : table.aic) emit("aic", row);
  for (const TimingRow& row : table.mrac) emit("mrac", row);

  ensure_dir(out_dir);
  write_file(fs::path(out_dir) / "timing.csv", csv.str());

  std::cout << "controller step wall time over " << table.steps
            << " steps (decoupled plant)\n";
  std::cout << csv.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint-space adaptive control toolkit: active inference and "
               "model-reference adaptive controllers on a planar-arm "
               "simulator"};
  app.require_subcommand(1);

  std::string config, config_b, out_dir = ".";
  long long seed = -1;
  double duration = -1.0;
  bool timing = false;

  CLI::App* run_cmd = app.add_subcommand("run", "run one scenario config");
  run_cmd->add_option("config", config, "scenario config file")->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--seed", seed, "override the noise seed");
  run_cmd->add_option("--duration", duration, "override the duration [s]");
  run_cmd->add_flag("--timing", timing,
                    "write measured per-step wall times into the CSV "
                    "(non-deterministic column)");

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run two configs on a shared plant");
  compare_cmd->add_option("configA", config, "first config")->required();
  compare_cmd->add_option("configB", config_b, "second config")->required();
  compare_cmd->add_option("--out", out_dir, "output directory");

  std::vector<int> dofs;
  int steps = 100000;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "controller step-time benchmark");
  bench_cmd->add_option("--dofs", dofs, "DOF counts, e.g. --dofs 2,8,32,64")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--steps", steps, "steps per measurement");
  bench_cmd->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return cmd_run(config, out_dir, seed, duration, timing);
    }
    if (compare_cmd->parsed()) {
      return cmd_compare(config, config_b, out_dir);
    }
    return cmd_bench(dofs, steps, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
