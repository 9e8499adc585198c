#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spheresync/rng.hpp"
#include "spheresync/scenario.hpp"

namespace {

using namespace spheresync;

constexpr int kExitMonitorFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIntegration = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string default_out_root() {
  const char* env = std::getenv("SPHERESYNC_OUT");
  return (env && *env) ? std::string(env) : std::string("out");
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("expected a comma-separated number list, got: " + text);
    }
  }
  return out;
}

// Overrides that reseed a config from one master value: the master seed
// is replaced and any explicit sub-seeds are dropped so they re-derive.
void push_seed_overrides(std::vector<std::string>& sets, std::uint64_t seed) {
  sets.push_back("seed=" + std::to_string(seed));
  sets.push_back("initial.cap.seed=null");
  sets.push_back("schedule.random.seed=null");
  sets.push_back("weights.seed=null");
}

struct RunOptions {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;
  bool has_seed = false;
  std::uint64_t seed = 0;
  double dt = 0.0;
  bool quiet = false;
};

ScenarioConfig load_config(const RunOptions& opt) {
  std::string text = read_file(opt.config_path);
  std::vector<std::string> sets = opt.sets;
  if (opt.has_seed) push_seed_overrides(sets, opt.seed);
  if (opt.dt > 0.0) sets.push_back("integration.dt=" + std::to_string(opt.dt));
  if (!sets.empty()) text = apply_overrides(text, sets);
  const std::string base_dir =
      std::filesystem::path(opt.config_path).parent_path().string();
  return parse_scenario(text, base_dir.empty() ? "." : base_dir);
}

int exit_code_for(const RunArtifacts& run) {
  if (!run.integration_ok) return kExitIntegration;
  return run.monitors_passed ? 0 : kExitMonitorFail;
}

int cmd_run(const RunOptions& opt) {
  const ScenarioConfig cfg = load_config(opt);
  const std::string out_dir =
      opt.out_dir.empty()
          ? (std::filesystem::path(default_out_root()) / cfg.name).string()
          : opt.out_dir;
  const RunArtifacts run = run_scenario(cfg, out_dir);
  if (!opt.quiet) {
    std::cout << "scenario: " << cfg.name << "\n";
    std::cout << "artifacts: " << run.directory << "\n";
    if (!run.integration_ok)
      std::cout << "integration: ABORTED (" << run.trajectory.abort_reason
                << " at t=" << run.trajectory.abort_time << ")\n";
    for (const MetricSeries& s : run.verdicts) {
      std::cout << "monitor " << s.name << ": " << to_string(s.verdict);
      if (s.first_violation_time)
        std::cout << " (first violation t=" << *s.first_violation_time << ")";
      if (!s.witness.empty()) std::cout << " [" << s.witness << "]";
      std::cout << "\n";
    }
  }
  return exit_code_for(run);
}

int cmd_check_schedule(const std::string& path, const std::string& mode,
                       bool quiet) {
  // Accept either a bare schedule file or a full scenario config.
  const std::string text = read_file(path);
  const GraphSchedule sched = [&] {
    const auto doc = nlohmann::json::parse(text, nullptr, false);
    if (!doc.is_discarded() && doc.is_object() && doc.contains("schedule")) {
      const std::string base_dir =
          std::filesystem::path(path).parent_path().string();
      ScenarioConfig cfg =
          parse_scenario(text, base_dir.empty() ? "." : base_dir);
      if (!cfg.schedule)
        throw ConfigError("scenario config carries no schedule");
      return *cfg.schedule;
    }
    return schedule_from_json(text);
  }();
  std::vector<ConnectivityMode> modes;
  if (mode == "both") {
    modes = {ConnectivityMode::strong, ConnectivityMode::quasi_strong};
  } else {
    modes = {connectivity_mode_from_string(mode)};
  }
  if (!quiet)
    std::cout << "schedule: n=" << sched.node_count()
              << " segments=" << sched.segments().size()
              << " tau_D=" << sched.tau_d() << " T=" << sched.window()
              << " horizon=" << sched.horizon() << "\n";
  bool all_ok = true;
  for (ConnectivityMode m : modes) {
    const UniformityReport rep = is_uniformly_connected(sched, m);
    all_ok = all_ok && rep.uniform;
    if (!quiet) {
      std::cout << "uniformly " << to_string(m) << ": "
                << (rep.uniform ? "yes" : "no");
      if (!rep.uniform && rep.first_failing_anchor)
        std::cout << " (first failing window starts at t="
                  << *rep.first_failing_anchor << ")";
      std::cout << " [windows checked: " << rep.anchors_checked << "]\n";
    }
  }
  return all_ok ? 0 : kExitMonitorFail;
}

struct SweepOptions {
  RunOptions base;
  int runs = 16;
  int jobs = 0;
  std::string epsilons;
  std::string delta_scales;
};

int cmd_sweep(const SweepOptions& opt) {
  const std::uint64_t base_seed = opt.base.has_seed ? opt.base.seed : 0;
  const std::string root =
      opt.base.out_dir.empty()
          ? (std::filesystem::path(default_out_root()) / "sweep").string()
          : opt.base.out_dir;

  struct Entry {
    std::uint64_t seed = 0;
    std::string dir;
    bool passed = false;
    bool aborted = false;
    std::string error;
    nlohmann::json verdicts;
  };
  std::vector<Entry> entries(opt.runs);

  std::atomic<int> cursor{0};
  const auto worker = [&]() {
    for (;;) {
      const int k = cursor.fetch_add(1);
      if (k >= opt.runs) return;
      Entry& e = entries[k];
      e.seed = derive_seed(base_seed, 1000 + static_cast<std::uint64_t>(k));
      char leaf[32];
      std::snprintf(leaf, sizeof(leaf), "run_%03d", k);
      e.dir = (std::filesystem::path(root) / leaf).string();
      try {
        RunOptions ro = opt.base;
        ro.has_seed = true;
        ro.seed = e.seed;
        const ScenarioConfig cfg = load_config(ro);
        const RunArtifacts run = run_scenario(cfg, e.dir);
        e.passed = run.integration_ok && run.monitors_passed;
        e.aborted = !run.integration_ok;
        e.verdicts = nlohmann::json::parse(verdicts_to_json(run.verdicts));
      } catch (const std::exception& ex) {
        e.aborted = true;
        e.error = ex.what();
      }
    }
  };
  int jobs = opt.jobs > 0 ? opt.jobs
                          : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min(jobs, opt.runs));
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  nlohmann::json report;
  report["runs"] = opt.runs;
  report["base_seed"] = base_seed;
  report["entries"] = nlohmann::json::array();
  bool any_abort = false;
  bool any_fail = false;
  for (const Entry& e : entries) {
    nlohmann::json je;
    je["seed"] = e.seed;
    je["dir"] = e.dir;
    je["passed"] = e.passed;
    je["aborted"] = e.aborted;
    if (!e.error.empty()) je["error"] = e.error;
    if (!e.verdicts.is_null()) je["verdicts"] = e.verdicts;
    report["entries"].push_back(std::move(je));
    any_abort = any_abort || e.aborted;
    any_fail = any_fail || (!e.aborted && !e.passed);
  }
  report["all_passed"] = !any_abort && !any_fail;

  const std::vector<double> eps = parse_double_list(opt.epsilons);
  if (!eps.empty()) {
    std::vector<double> scales = parse_double_list(opt.delta_scales);
    if (scales.empty()) scales = {0.5, 0.25, 0.1};
    const auto runner = [&](std::uint64_t seed, double scale) {
      RunOptions ro = opt.base;
      ro.has_seed = true;
      ro.seed = derive_seed(base_seed, 5000 + seed);
      if (scale != 1.0) {
        ScenarioConfig probe = load_config(ro);
        if (probe.initial.kind != InitialSpec::Kind::cap)
          throw ConfigError("delta search needs a cap initial to rescale");
        ro.sets.push_back("initial.cap.radius=" +
                          std::to_string(probe.initial.cap_radius * scale));
      }
      return run_scenario_in_memory(load_config(ro)).trajectory;
    };
    const GuasReport guas = certify_guas(runner, eps, scales, opt.runs);
    report["guas"] = nlohmann::json::parse(guas_report_to_json(guas));
  }

  std::filesystem::create_directories(root);
  std::ofstream out(std::filesystem::path(root) / "batch_report.json",
                    std::ios::binary | std::ios::trunc);
  out << report.dump(2) << "\n";
  if (!opt.base.quiet) {
    std::cout << "sweep: " << opt.runs << " runs -> " << root << "\n";
    std::cout << "all_passed: " << (report["all_passed"].get<bool>() ? "yes" : "no")
              << "\n";
  }
  if (any_abort) return kExitIntegration;
  return any_fail ? kExitMonitorFail : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification toolkit for consensus on the unit sphere"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "Integrate one scenario and run its monitors");
  run->add_option("config", run_opt.config_path, "Scenario config JSON")->required();
  run->add_option("--out", run_opt.out_dir, "Artifact directory");
  run->add_option("--dt", run_opt.dt, "Override integration step");
  run->add_option("--set", run_opt.sets, "Override config values (path.to.key=value)");
  run->add_flag("--quiet", run_opt.quiet, "Suppress progress output");
  auto* run_seed = run->add_option("--seed", run_opt.seed, "Master seed override");

  std::string sched_path;
  std::string sched_mode = "quasi_strong";
  bool sched_quiet = false;
  CLI::App* check = app.add_subcommand(
      "check-schedule", "Certify uniform connectivity of a schedule JSON");
  check->add_option("schedule", sched_path, "Schedule JSON")->required();
  check->add_option("--mode", sched_mode, "strong | quasi_strong | both")
      ->check(CLI::IsMember({"strong", "quasi_strong", "both"}));
  check->add_flag("--quiet", sched_quiet, "Suppress detail output");

  SweepOptions sweep_opt;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run a seeded batch of one scenario, optionally with a stability search");
  sweep->add_option("config", sweep_opt.base.config_path, "Scenario config JSON")
      ->required();
  sweep->add_option("--runs", sweep_opt.runs, "Batch size")->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", sweep_opt.jobs, "Worker threads (default: hardware)");
  sweep->add_option("--out", sweep_opt.base.out_dir, "Batch output root");
  sweep->add_option("--dt", sweep_opt.base.dt, "Override integration step");
  sweep->add_option("--set", sweep_opt.base.sets, "Override config values");
  sweep->add_option("--epsilons", sweep_opt.epsilons,
                    "Comma-separated epsilon list for the stability report");
  sweep->add_option("--delta-scales", sweep_opt.delta_scales,
                    "Comma-separated initial-spread scales for the delta search");
  sweep->add_flag("--quiet", sweep_opt.base.quiet, "Suppress progress output");
  auto* sweep_seed = sweep->add_option("--seed", sweep_opt.base.seed, "Base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  run_opt.has_seed = run_seed->count() > 0;
  sweep_opt.base.has_seed = sweep_seed->count() > 0;

  try {
    if (app.got_subcommand(run)) return cmd_run(run_opt);
    if (app.got_subcommand(check))
      return cmd_check_schedule(sched_path, sched_mode, sched_quiet);
    if (app.got_subcommand(sweep)) return cmd_sweep(sweep_opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIntegration;
  }
  return kExitConfig;
}
