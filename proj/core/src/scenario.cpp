#include "spheresync/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spheresync/rng.hpp"

namespace spheresync {

namespace {

using nlohmann::json;

Vec vec_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw ConfigError(std::string(what) + ": expected a nonempty array");
  Vec v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number())
      throw ConfigError(std::string(what) + ": expected numbers");
    v[static_cast<int>(k)] = j[k].get<double>();
  }
  return v;
}

Mat points_from_json(const json& j, int d, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ConfigError(std::string(what) + ": expected n point rows");
  Mat m(d, n);
  for (int i = 0; i < n; ++i) {
    const Vec p = vec_from_json(j[i], what);
    if (p.size() != d)
      throw ConfigError(std::string(what) + ": point dimension mismatch");
    m.col(i) = p;
  }
  return m;
}

const std::set<std::string>& sphere_monitors() {
  static const std::set<std::string> s{"hemisphere_invariance",
                                       "max_norm_lyapunov",
                                       "point_convergence"};
  return s;
}

const std::set<std::string>& lifted_monitors() {
  static const std::set<std::string> s{"pairwise_lyapunov", "ratio_bound",
                                       "hull_invariance", "origin_attraction",
                                       "point_convergence"};
  return s;
}

WeightFamily weights_from_json(const json& j, int n, std::uint64_t master) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "constant") return WeightFamily::constant(j.at("value").get<double>());
  if (family == "identity") return WeightFamily::identity();
  if (family == "bounded_rational") return WeightFamily::bounded_rational();
  if (family == "edge_constants") {
    std::map<std::pair<int, int>, double> values;
    if (j.contains("values")) {
      for (const auto& row : j.at("values")) {
        if (!row.is_array() || row.size() != 3)
          throw ConfigError("weights.values: expected rows [i, j, gain]");
        values[{row[0].get<int>(), row[1].get<int>()}] = row[2].get<double>();
      }
    }
    return WeightFamily::edge_constants(std::move(values),
                                        j.value("default", 1.0));
  }
  if (family == "random_edge_constants") {
    const std::uint64_t seed =
        j.contains("seed") ? j.at("seed").get<std::uint64_t>()
                           : derive_seed(master, 3);
    return WeightFamily::random_edge_constants(n, j.at("low").get<double>(),
                                               j.at("high").get<double>(), seed);
  }
  throw ConfigError("unknown weight family: " + family);
}

json weights_resolved_json(const json& j, std::uint64_t master) {
  json out = j;
  if (out.at("family") == "edge_constants" && !out.contains("default"))
    out["default"] = 1.0;
  if (out.at("family") == "random_edge_constants" && !out.contains("seed"))
    out["seed"] = derive_seed(master, 3);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

}  // namespace

std::uint64_t ScenarioConfig::effective_initial_seed() const {
  if (initial.cap_seed) return *initial.cap_seed;
  return derive_seed(master_seed, 1);
}

ScenarioConfig parse_scenario(const std::string& json_text,
                              const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON parse failure: ") + e.what());
  }
  try {
    ScenarioConfig cfg;
    cfg.name = j.value("name", std::string("scenario"));
    cfg.d = j.at("d").get<int>();
    cfg.n = j.at("n").get<int>();
    if (cfg.d < 2 || cfg.n < 1)
      throw ConfigError("scenario: need d >= 2 and n >= 1");
    const std::string system = j.value("system", std::string("sphere"));
    if (system == "sphere")
      cfg.system = SystemKind::sphere;
    else if (system == "lifted")
      cfg.system = SystemKind::lifted;
    else
      throw ConfigError("scenario.system must be 'sphere' or 'lifted'");
    cfg.master_seed = j.value("seed", std::uint64_t{0});

    const json& init = j.at("initial");
    if (init.contains("cap")) {
      const json& cap = init.at("cap");
      cfg.initial.kind = InitialSpec::Kind::cap;
      cfg.initial.cap_axis = vec_from_json(cap.at("axis"), "initial.cap.axis");
      if (cfg.initial.cap_axis.size() != cfg.d)
        throw ConfigError("initial.cap.axis: dimension mismatch");
      cfg.initial.cap_radius = cap.at("radius").get<double>();
      if (cap.contains("seed"))
        cfg.initial.cap_seed = cap.at("seed").get<std::uint64_t>();
    } else if (init.contains("explicit")) {
      cfg.initial.kind = InitialSpec::Kind::explicit_sphere;
      cfg.initial.points =
          points_from_json(init.at("explicit"), cfg.d, cfg.n, "initial.explicit");
    } else if (init.contains("lifted")) {
      cfg.initial.kind = InitialSpec::Kind::explicit_lifted;
      cfg.initial.points =
          points_from_json(init.at("lifted"), cfg.d, cfg.n, "initial.lifted");
    } else {
      throw ConfigError("initial: need one of cap / explicit / lifted");
    }
    if (init.contains("scales")) {
      const Vec scales = vec_from_json(init.at("scales"), "initial.scales");
      if (scales.size() != cfg.n)
        throw ConfigError("initial.scales: need one scale per agent");
      cfg.initial.scales = scales;
    }
    if (cfg.initial.kind == InitialSpec::Kind::explicit_lifted &&
        cfg.system != SystemKind::lifted)
      throw ConfigError("initial.lifted requires system == 'lifted'");

    const json& sched = j.at("schedule");
    json sched_resolved = sched;
    if (sched.contains("file")) {
      const std::filesystem::path p =
          std::filesystem::path(base_dir) / sched.at("file").get<std::string>();
      cfg.schedule = schedule_from_json(read_text_file(p.string()));
      sched_resolved["resolved_path"] = p.string();
    } else if (sched.contains("random")) {
      const json& r = sched.at("random");
      const std::uint64_t seed = r.contains("seed")
                                     ? r.at("seed").get<std::uint64_t>()
                                     : derive_seed(cfg.master_seed, 2);
      cfg.schedule = random_schedule(
          cfg.n, r.at("switch_period").get<double>(),
          r.at("horizon").get<double>(),
          connectivity_mode_from_string(r.at("mode").get<std::string>()), seed);
      sched_resolved["random"]["seed"] = seed;
    } else if (sched.contains("inline")) {
      cfg.schedule = schedule_from_json(sched.at("inline").dump());
    } else {
      // bare schedule object placed directly under "schedule"
      cfg.schedule = schedule_from_json(sched.dump());
    }
    if (cfg.schedule->node_count() != cfg.n)
      throw ConfigError("schedule: node count does not match scenario n");

    cfg.weights = weights_from_json(j.at("weights"), cfg.n, cfg.master_seed);

    if (j.contains("integration")) {
      const json& integ = j.at("integration");
      cfg.integration.dt = integ.value("dt", 1e-3);
      cfg.integration.t0 = integ.value("t0", cfg.schedule->start_time());
      cfg.integration.tf = integ.value("tf", cfg.schedule->horizon());
      cfg.integration.renormalize = integ.value("renormalize", true);
      cfg.integration.record_stride = integ.value("record_stride", 1);
    } else {
      cfg.integration.t0 = cfg.schedule->start_time();
      cfg.integration.tf = cfg.schedule->horizon();
    }

    if (j.contains("monitors"))
      for (const auto& m : j.at("monitors"))
        cfg.monitors.push_back(m.get<std::string>());
    const auto& allowed = (cfg.system == SystemKind::sphere)
                              ? sphere_monitors()
                              : lifted_monitors();
    for (const std::string& m : cfg.monitors)
      if (!allowed.count(m))
        throw ConfigError("monitor '" + m + "' unknown or incompatible with system '" +
                          system + "'");

    if (j.contains("ball")) {
      cfg.ball_axis = vec_from_json(j.at("ball").at("axis"), "ball.axis");
      if (cfg.ball_axis->size() != cfg.d)
        throw ConfigError("ball.axis: dimension mismatch");
      cfg.ball_radius = j.at("ball").at("radius").get<double>();
    } else if (cfg.initial.kind == InitialSpec::Kind::cap) {
      cfg.ball_axis = cfg.initial.cap_axis;
      cfg.ball_radius = cfg.initial.cap_radius;
    }
    if (std::find(cfg.monitors.begin(), cfg.monitors.end(),
                  "hemisphere_invariance") != cfg.monitors.end() &&
        !cfg.ball_axis)
      throw ConfigError("hemisphere_invariance requires a ball (or cap initial)");

    // Resolved config for the manifest: every omitted default made
    // explicit.
    json resolved;
    resolved["name"] = cfg.name;
    resolved["d"] = cfg.d;
    resolved["n"] = cfg.n;
    resolved["system"] = system;
    resolved["seed"] = cfg.master_seed;
    resolved["initial"] = j.at("initial");
    if (cfg.initial.kind == InitialSpec::Kind::cap &&
        !resolved["initial"]["cap"].contains("seed"))
      resolved["initial"]["cap"]["seed"] = cfg.effective_initial_seed();
    resolved["schedule"] = sched_resolved;
    resolved["weights"] = weights_resolved_json(j.at("weights"), cfg.master_seed);
    resolved["integration"] = {{"dt", cfg.integration.dt},
                               {"t0", cfg.integration.t0},
                               {"tf", cfg.integration.tf},
                               {"renormalize", cfg.integration.renormalize},
                               {"record_stride", cfg.integration.record_stride}};
    resolved["monitors"] = cfg.monitors;
    if (cfg.ball_axis) {
      resolved["ball"]["axis"] = std::vector<double>(
          cfg.ball_axis->data(), cfg.ball_axis->data() + cfg.ball_axis->size());
      resolved["ball"]["radius"] = *cfg.ball_radius;
    }
    cfg.resolved_json = resolved.dump(2);
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON structure invalid: ") + e.what());
  }
}

std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON parse failure: ") + e.what());
  }
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("override must look like path.to.key=value: " + ov);
    const std::string path = ov.substr(0, eq);
    const std::string raw = ov.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;  // unquoted strings
    json* node = &j;
    std::size_t pos = 0;
    while (true) {
      const std::size_t dot = path.find('.', pos);
      const std::string key = path.substr(pos, dot - pos);
      if (key.empty()) throw ConfigError("override has an empty path segment: " + ov);
      if (dot == std::string::npos) {
        // null means "remove this key"; never materialize the path for it.
        if (value.is_null()) {
          if (node->is_object()) node->erase(key);
        } else {
          (*node)[key] = value;
        }
        break;
      }
      if (value.is_null()) {
        if (!node->is_object() || !node->contains(key)) break;
        node = &(*node)[key];
      } else {
        node = &(*node)[key];
      }
      pos = dot + 1;
    }
  }
  return j.dump(2);
}

namespace {

SphereEnsemble build_sphere_initial(const ScenarioConfig& cfg) {
  if (cfg.initial.kind == InitialSpec::Kind::cap) {
    const UnitVector axis = sphere_project(cfg.initial.cap_axis);
    const auto pts = sample_cap(axis, cfg.initial.cap_radius, cfg.n,
                                cfg.effective_initial_seed());
    return SphereEnsemble(pts);
  }
  if (cfg.initial.kind == InitialSpec::Kind::explicit_sphere)
    return SphereEnsemble(cfg.initial.points, 1e-9);
  throw ConfigError("sphere system needs cap or explicit initial data");
}

LiftedEnsemble build_lifted_initial(const ScenarioConfig& cfg) {
  if (cfg.initial.kind == InitialSpec::Kind::explicit_lifted)
    return LiftedEnsemble(cfg.initial.points);
  Mat pts = build_sphere_initial(cfg).states();
  if (cfg.initial.scales) {
    for (int i = 0; i < cfg.n; ++i) {
      if (!((*cfg.initial.scales)[i] > 0.0))
        throw ConfigError("initial.scales must be positive");
      pts.col(i) *= (*cfg.initial.scales)[i];
    }
  }
  return LiftedEnsemble(std::move(pts));
}

}  // namespace

RunArtifacts run_scenario_in_memory(const ScenarioConfig& config) {
  if (!config.schedule || !config.weights)
    throw ConfigError("scenario is missing a schedule or weight family");
  RunArtifacts out;
  if (config.system == SystemKind::sphere) {
    out.trajectory = integrate_sphere(build_sphere_initial(config),
                                      *config.schedule, *config.weights,
                                      config.integration);
  } else {
    out.trajectory = integrate_lifted(build_lifted_initial(config),
                                      *config.schedule, *config.weights,
                                      config.integration);
  }
  out.integration_ok = !out.trajectory.aborted;

  for (const std::string& name : config.monitors) {
    if (name == "hemisphere_invariance") {
      out.verdicts.push_back(monitor_hemisphere_invariance(
          out.trajectory, sphere_project(*config.ball_axis),
          *config.ball_radius));
    } else if (name == "max_norm_lyapunov") {
      out.verdicts.push_back(monitor_max_norm_lyapunov(out.trajectory));
    } else if (name == "pairwise_lyapunov") {
      out.verdicts.push_back(monitor_pairwise_lyapunov(out.trajectory));
    } else if (name == "ratio_bound") {
      out.verdicts.push_back(monitor_ratio_bound(
          out.trajectory, config.weights->bounds().global_upper));
    } else if (name == "hull_invariance") {
      out.verdicts.push_back(monitor_hull_invariance(out.trajectory));
    } else if (name == "point_convergence") {
      out.verdicts.push_back(monitor_point_convergence(out.trajectory).series);
    } else if (name == "origin_attraction") {
      out.verdicts.push_back(
          monitor_origin_attraction(out.trajectory, *config.weights));
    }
  }
  for (const MetricSeries& s : out.verdicts)
    if (s.verdict == Verdict::fail) out.monitors_passed = false;
  return out;
}

RunArtifacts run_scenario(const ScenarioConfig& config,
                          const std::string& out_dir) {
  RunArtifacts result = run_scenario_in_memory(config);
  result.directory = out_dir;
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  write_text_file((dir / "trajectory.csv").string(),
                  trajectory_to_csv(result.trajectory));

  Trajectory with_diameter = result.trajectory;
  auto& diam_col = with_diameter.diagnostics["diameter"];
  for (const Mat& st : with_diameter.states)
    diam_col.push_back(ensemble_diameter(st));
  write_text_file((dir / "metrics.csv").string(),
                  diagnostics_to_csv(with_diameter));

  write_text_file((dir / "verdicts.json").string(),
                  verdicts_to_json(result.verdicts));

  nlohmann::json manifest;
  manifest["artifacts"] = {{"trajectory", "trajectory.csv"},
                          {"metrics", "metrics.csv"},
                          {"verdicts", "verdicts.json"}};
  manifest["config_hash"] = "fnv1a64:" + fnv1a_hex(config.resolved_json);
  manifest["config_resolved"] = nlohmann::json::parse(config.resolved_json);
  manifest["master_seed"] = config.master_seed;
  manifest["aborted"] = result.trajectory.aborted;
  if (result.trajectory.aborted) {
    manifest["abort_reason"] = result.trajectory.abort_reason;
    manifest["abort_time"] = result.trajectory.abort_time;
    if (result.trajectory.abort_agent >= 0)
      manifest["abort_agent"] = result.trajectory.abort_agent;
  }
  manifest["monitors_passed"] = result.monitors_passed;
  manifest["tool"] = {{"name", "spheresync"}, {"version", "0.1.0"}};
  write_text_file((dir / "manifest.json").string(), manifest.dump(2));
  return result;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace spheresync
