#include "spheresync/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace spheresync {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;
constexpr double kStepSlack = 1e-9;

std::vector<Vec> columns_of(const Mat& m) {
  std::vector<Vec> cols;
  cols.reserve(m.cols());
  for (int i = 0; i < m.cols(); ++i) cols.push_back(m.col(i));
  return cols;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    default:
      return "not_applicable";
  }
}

double ensemble_diameter(const Mat& states) {
  double best = 0.0;
  for (int i = 0; i < states.cols(); ++i)
    for (int j = i + 1; j < states.cols(); ++j)
      best = std::max(best, (states.col(i) - states.col(j)).norm());
  return best;
}

double consensus_diameter(const SphereEnsemble& x) {
  return ensemble_diameter(x.states());
}

MetricSeries monitor_hemisphere_invariance(const Trajectory& traj,
                                           const UnitVector& center,
                                           double radius) {
  MetricSeries s;
  s.name = "hemisphere_invariance";
  s.times = traj.times;
  if (radius >= kHalfPi) {
    s.witness = "ball radius not strictly inside an open hemisphere";
    return s;
  }
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    double worst = 0.0;
    int worst_agent = 0;
    for (int i = 0; i < traj.agents; ++i) {
      const double dist = geodesic_distance(
          center, UnitVector(traj.states[k].col(i), kUnitTolTrajectory));
      if (dist > worst) {
        worst = dist;
        worst_agent = i;
      }
    }
    s.values.push_back(worst);
    if (worst > radius + kStepSlack) {
      if (k == 0) {
        s.verdict = Verdict::not_applicable;
        s.witness = "initial states not inside the ball";
        return s;
      }
      s.verdict = Verdict::fail;
      s.first_violation_time = traj.times[k];
      s.witness = "agent " + std::to_string(worst_agent) + " left the ball";
      return s;
    }
  }
  s.verdict = Verdict::pass;
  return s;
}

MetricSeries monitor_max_norm_lyapunov(const Trajectory& traj) {
  MetricSeries s;
  s.name = "max_norm_lyapunov";
  s.times = traj.times;
  for (int i = 0; i < traj.agents; ++i) {
    if (traj.states[0](0, i) <= 0.0) {
      s.witness = "initial states not strictly on the northern hemisphere";
      return s;
    }
  }
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    double v = 0.0;
    for (int i = 0; i < traj.agents; ++i)
      v = std::max(v,
                   traj.states[k].col(i).tail(traj.dim - 1).squaredNorm());
    s.values.push_back(v);
    if (k > 0 && s.values[k] > s.values[k - 1] + kStepSlack) {
      s.verdict = Verdict::fail;
      s.first_violation_time = traj.times[k];
      s.witness = "max equatorial norm increased";
      return s;
    }
  }
  s.verdict = Verdict::pass;
  return s;
}

MetricSeries monitor_pairwise_lyapunov(const Trajectory& traj) {
  MetricSeries s;
  s.name = "pairwise_lyapunov";
  s.times = traj.times;
  if (origin_in_convex_hull(columns_of(traj.states[0]))) {
    s.witness = "origin lies in the initial hull";
    return s;
  }
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const double w = ensemble_diameter(traj.states[k]);
    s.values.push_back(w * w);
    if (k > 0 && s.values[k] > s.values[k - 1] + kStepSlack) {
      s.verdict = Verdict::fail;
      s.first_violation_time = traj.times[k];
      s.witness = "max pairwise squared distance increased";
      return s;
    }
  }
  s.verdict = Verdict::pass;
  return s;
}

MetricSeries monitor_ratio_bound(const Trajectory& traj, double alpha) {
  MetricSeries s;
  s.name = "ratio_bound";
  s.times = traj.times;
  if (!(alpha > 0.0)) {
    s.witness = "no positive global weight bound declared";
    return s;
  }
  const double rate = 3.0 * alpha * traj.agents;
  double log_v0 = 0.0;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < traj.agents; ++i) {
      const double nrm = traj.states[k].col(i).norm();
      lo = std::min(lo, nrm);
      hi = std::max(hi, nrm);
    }
    const double v = hi / lo;
    s.values.push_back(v);
    if (k == 0) log_v0 = std::log(v);
    // Log-domain comparison: exp(rate * t) overflows long before the
    // ratio itself misbehaves.
    const double log_bound = rate * (traj.times[k] - traj.times[0]) + log_v0 +
                             std::log1p(1e-6);
    if (std::log(v) > log_bound) {
      s.verdict = Verdict::fail;
      s.first_violation_time = traj.times[k];
      s.witness = "norm ratio exceeded the exponential envelope";
      return s;
    }
  }
  s.verdict = Verdict::pass;
  return s;
}

MetricSeries monitor_hull_invariance(const Trajectory& traj) {
  MetricSeries s;
  s.name = "hull_invariance";
  s.times = traj.times;
  const std::vector<Vec> hull = columns_of(traj.states[0]);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    double worst = 0.0;
    int worst_agent = 0;
    for (int i = 0; i < traj.agents; ++i) {
      const double dist = hull_distance(hull, traj.states[k].col(i));
      if (dist > worst) {
        worst = dist;
        worst_agent = i;
      }
    }
    s.values.push_back(worst);
    if (worst > 1e-7) {
      s.verdict = Verdict::fail;
      s.first_violation_time = traj.times[k];
      s.witness = "agent " + std::to_string(worst_agent) +
                  " left the initial hull";
      return s;
    }
  }
  s.verdict = Verdict::pass;
  return s;
}

PointConvergence monitor_point_convergence(const Trajectory& traj) {
  PointConvergence out;
  MetricSeries& s = out.series;
  s.name = "point_convergence";
  const double t0 = traj.times.front();
  const double tf = traj.times.back();
  const double tail_start = tf - 0.1 * (tf - t0);
  const Mat& final_state = traj.states.back();
  out.limit = final_state.rowwise().mean();

  std::size_t first_tail = traj.times.size();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    if (traj.times[k] >= tail_start - 1e-12) {
      first_tail = k;
      break;
    }
  }
  // The window always covers at least the last two samples, so sparse
  // recordings still get a verdict.
  if (traj.times.size() >= 2)
    first_tail = std::min(first_tail, traj.times.size() - 2);
  if (first_tail + 1 >= traj.times.size()) {
    s.witness = "trailing window holds fewer than two samples";
    return out;
  }
  s.verdict = Verdict::pass;
  for (std::size_t k = first_tail; k < traj.times.size(); ++k) {
    double disp = 0.0;
    for (int i = 0; i < traj.agents; ++i)
      disp = std::max(disp,
                      (traj.states[k].col(i) - final_state.col(i)).norm());
    const double v = std::max(ensemble_diameter(traj.states[k]), disp);
    s.times.push_back(traj.times[k]);
    s.values.push_back(v);
    if (v >= 1e-6 && s.verdict == Verdict::pass) {
      s.verdict = Verdict::fail;
      s.first_violation_time = traj.times[k];
      s.witness = "trailing diameter or displacement at or above 1e-6";
    }
  }
  return out;
}

MetricSeries monitor_origin_attraction(const Trajectory& traj,
                                       const WeightFamily& weights) {
  MetricSeries s;
  s.name = "origin_attraction";
  s.times = traj.times;
  if (!weights.bounds().lower_bound || !(*weights.bounds().lower_bound > 0.0)) {
    s.witness = "weight family declares no positive lower bound";
    return s;
  }
  if (!origin_in_convex_hull(columns_of(traj.states[0]))) {
    s.witness = "origin not inside the initial hull";
    return s;
  }
  for (const Mat& st : traj.states) s.values.push_back(ensemble_diameter(st));
  if (s.values.back() < 1e-5) {
    s.verdict = Verdict::pass;
  } else {
    s.verdict = Verdict::fail;
    s.first_violation_time = traj.times.back();
    s.witness = "terminal diameter at or above 1e-5";
  }
  return s;
}

std::string verdicts_to_json(const std::vector<MetricSeries>& series) {
  nlohmann::json arr = nlohmann::json::array();
  for (const MetricSeries& s : series) {
    nlohmann::json j;
    j["monitor"] = s.name;
    j["verdict"] = to_string(s.verdict);
    if (s.first_violation_time) j["first_violation_time"] = *s.first_violation_time;
    if (!s.witness.empty()) j["witness"] = s.witness;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

namespace {

std::vector<double> diameter_series(const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const Mat& st : traj.states) out.push_back(ensemble_diameter(st));
  return out;
}

// First time after which the series stays strictly below eps; +inf when
// it never settles.
double settle_time(const std::vector<double>& times,
                   const std::vector<double>& diam, double eps) {
  std::size_t k = diam.size();
  while (k > 0 && diam[k - 1] < eps) --k;
  if (k == diam.size()) return std::numeric_limits<double>::infinity();
  return times[k];
}

}  // namespace

GuasReport certify_guas(
    const std::function<Trajectory(std::uint64_t, double)>& runner,
    const std::vector<double>& epsilons,
    const std::vector<double>& delta_scales, int batch) {
  if (batch < 1) throw ConfigError("certify_guas: batch must be >= 1");
  GuasReport report;
  report.batch = batch;
  report.note =
      "sampling evidence over a finite seeded batch; not a proof of "
      "uniform stability";

  struct BatchData {
    std::vector<std::vector<double>> times;
    std::vector<std::vector<double>> diam;
    std::vector<double> initial_diam;
    bool ok = true;
  };
  const auto run_batch = [&](double scale) {
    BatchData data;
    for (int k = 0; k < batch; ++k) {
      const Trajectory traj = runner(static_cast<std::uint64_t>(k), scale);
      if (traj.aborted || traj.states.empty()) {
        data.ok = false;
        break;
      }
      data.times.push_back(traj.times);
      data.diam.push_back(diameter_series(traj));
      data.initial_diam.push_back(data.diam.back().front());
    }
    return data;
  };

  const BatchData full = run_batch(1.0);
  std::vector<std::pair<double, BatchData>> shrunk;
  std::vector<double> scales = delta_scales;
  std::sort(scales.begin(), scales.end(), std::greater<double>());
  for (double sc : scales) shrunk.emplace_back(sc, run_batch(sc));

  report.all_pass = full.ok;
  for (double eps : epsilons) {
    GuasEpsilonEntry entry;
    entry.epsilon = eps;
    if (full.ok) {
      entry.attained = true;
      for (int k = 0; k < batch; ++k) {
        const double st = settle_time(full.times[k], full.diam[k], eps);
        if (!std::isfinite(st)) entry.attained = false;
        entry.attraction_time = std::max(entry.attraction_time, st);
      }
    }
    for (const auto& [sc, data] : shrunk) {
      (void)sc;
      if (!data.ok) continue;
      bool contained = true;
      double spread = 0.0;
      for (int k = 0; k < batch && contained; ++k) {
        spread = std::max(spread, data.initial_diam[k]);
        for (double v : data.diam[k])
          if (v > eps) {
            contained = false;
            break;
          }
      }
      if (contained) {
        entry.delta = spread;
        entry.delta_ok = true;
        break;
      }
    }
    if (!entry.attained || !entry.delta_ok) report.all_pass = false;
    report.entries.push_back(entry);
  }
  return report;
}

std::string guas_report_to_json(const GuasReport& report) {
  nlohmann::json j;
  j["batch"] = report.batch;
  j["note"] = report.note;
  j["all_pass"] = report.all_pass;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : report.entries) {
    nlohmann::json entry;
    entry["epsilon"] = e.epsilon;
    entry["attained"] = e.attained;
    if (std::isfinite(e.attraction_time))
      entry["attraction_time"] = e.attraction_time;
    if (e.delta) entry["delta"] = *e.delta;
    entry["delta_ok"] = e.delta_ok;
    j["entries"].push_back(std::move(entry));
  }
  return j.dump(2);
}

}  // namespace spheresync
