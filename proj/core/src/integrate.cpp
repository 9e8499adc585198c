#include "spheresync/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace spheresync {

namespace {

void validate_config(const IntegrationConfig& c, const GraphSchedule& schedule) {
  if (!(c.dt > 0.0)) throw ConfigError("IntegrationConfig: dt must be positive");
  if (c.dt > schedule.tau_d() / 10.0 + 1e-15)
    throw ConfigError("IntegrationConfig: dt must not exceed tau_D / 10");
  if (!(c.tf > c.t0)) throw ConfigError("IntegrationConfig: need tf > t0");
  if (c.t0 < schedule.start_time() - 1e-12)
    throw ConfigError("IntegrationConfig: t0 precedes the schedule");
  if (c.record_stride < 1)
    throw ConfigError("IntegrationConfig: record_stride must be >= 1");
}

Mat rk4_step(const Mat& y, double h, const std::function<Mat(const Mat&)>& f) {
  const Mat k1 = f(y);
  const Mat k2 = f(y + (0.5 * h) * k1);
  const Mat k3 = f(y + (0.5 * h) * k2);
  const Mat k4 = f(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Next step endpoint: at most dt ahead, clipped to tf and to the first
// upcoming switch time so no step interior contains a switch. A boundary
// within a relative sliver of t + dt is snapped onto, so accumulated
// rounding never produces a ~1e-15 trailing step.
double next_boundary(double t, double dt, double tf,
                     const std::vector<double>& switches, std::size_t& sw) {
  while (sw < switches.size() && switches[sw] <= t + 1e-15) ++sw;
  const double sliver = 1e-9 * dt;
  double t_next = t + dt;
  if (t_next >= tf - sliver) t_next = tf;
  // Switch times lie strictly inside (t0, tf), so clipping to one can
  // never overshoot tf.
  if (sw < switches.size() && switches[sw] < t_next + sliver)
    t_next = switches[sw];
  return t_next;
}

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

Trajectory integrate_sphere(const SphereEnsemble& x0,
                            const GraphSchedule& schedule,
                            const WeightFamily& weights,
                            const IntegrationConfig& config) {
  validate_config(config, schedule);
  Trajectory traj;
  traj.dim = x0.dim();
  traj.agents = x0.size();
  traj.events = schedule.switch_times_between(config.t0, config.tf);

  Mat state = x0.states();
  double t = config.t0;
  traj.times.push_back(t);
  traj.states.push_back(state);
  auto& drift_col = traj.diagnostics["renorm_drift"];
  drift_col.push_back(0.0);

  std::size_t sw = 0;
  int since_record = 0;
  double drift_acc = 0.0;
  while (t < config.tf - 1e-15) {
    const double t_next =
        next_boundary(t, config.dt, config.tf, traj.events, sw);
    const DirectedGraph& g = graph_at(schedule, t);
    Mat next = rk4_step(state, t_next - t, [&](const Mat& s) {
      return sphere_field_ambient(s, g, weights);
    });
    if (!next.allFinite()) {
      traj.aborted = true;
      traj.abort_reason = "non-finite state";
      traj.abort_time = t_next;
      break;
    }
    double drift = 0.0;
    bool collapsed = false;
    for (int i = 0; i < next.cols(); ++i) {
      const double nrm = next.col(i).norm();
      drift = std::max(drift, std::abs(nrm - 1.0));
      if (nrm <= kZeroGuard) {
        collapsed = true;
        traj.abort_agent = i;
      }
    }
    if (collapsed) {
      traj.aborted = true;
      traj.abort_reason = "state norm collapsed";
      traj.abort_time = t_next;
      break;
    }
    if (config.renormalize)
      for (int i = 0; i < next.cols(); ++i) next.col(i) /= next.col(i).norm();
    drift_acc = std::max(drift_acc, drift);
    state = std::move(next);
    t = t_next;
    ++since_record;
    if (since_record >= config.record_stride || t >= config.tf - 1e-15) {
      traj.times.push_back(t);
      traj.states.push_back(state);
      drift_col.push_back(drift_acc);
      drift_acc = 0.0;
      since_record = 0;
    }
  }
  if (traj.aborted && traj.times.back() < t - 1e-15) {
    traj.times.push_back(t);
    traj.states.push_back(state);
    drift_col.push_back(drift_acc);
  }
  return traj;
}

Trajectory integrate_lifted(const LiftedEnsemble& z0,
                            const GraphSchedule& schedule,
                            const WeightFamily& weights,
                            const IntegrationConfig& config) {
  validate_config(config, schedule);
  Trajectory traj;
  traj.dim = z0.dim();
  traj.agents = z0.size();
  traj.events = schedule.switch_times_between(config.t0, config.tf);

  Mat state = z0.states();
  double t = config.t0;

  const auto norm_stats = [](const Mat& m) {
    double lo = m.col(0).norm();
    double hi = lo;
    for (int i = 1; i < m.cols(); ++i) {
      const double nrm = m.col(i).norm();
      lo = std::min(lo, nrm);
      hi = std::max(hi, nrm);
    }
    return std::pair<double, double>(lo, hi);
  };

  auto& min_col = traj.diagnostics["min_norm"];
  auto& ratio_col = traj.diagnostics["ratio_V"];
  const auto [lo0, hi0] = norm_stats(state);
  traj.times.push_back(t);
  traj.states.push_back(state);
  min_col.push_back(lo0);
  ratio_col.push_back(hi0 / lo0);

  std::size_t sw = 0;
  int since_record = 0;
  double group_min = lo0;
  while (t < config.tf - 1e-15) {
    const double t_next =
        next_boundary(t, config.dt, config.tf, traj.events, sw);
    const DirectedGraph& g = graph_at(schedule, t);
    Mat next;
    try {
      next = rk4_step(state, t_next - t, [&](const Mat& s) {
        return lifted_field_ambient(s, g, weights);
      });
    } catch (const ZeroNormError& e) {
      traj.aborted = true;
      traj.abort_reason = "zero norm during step";
      traj.abort_agent = e.agent();
      traj.abort_time = t;
      break;
    }
    if (!next.allFinite()) {
      traj.aborted = true;
      traj.abort_reason = "non-finite state";
      traj.abort_time = t_next;
      break;
    }
    const auto [lo, hi] = norm_stats(next);
    if (lo <= kZeroGuard) {
      traj.aborted = true;
      traj.abort_reason = "zero norm during step";
      traj.abort_time = t_next;
      for (int i = 0; i < next.cols(); ++i)
        if (next.col(i).norm() <= kZeroGuard) traj.abort_agent = i;
      break;
    }
    group_min = std::min(group_min, lo);
    state = std::move(next);
    t = t_next;
    ++since_record;
    if (since_record >= config.record_stride || t >= config.tf - 1e-15) {
      traj.times.push_back(t);
      traj.states.push_back(state);
      min_col.push_back(group_min);
      ratio_col.push_back(hi / lo);
      group_min = lo;
      since_record = 0;
    }
  }
  if (traj.aborted && traj.times.back() < t - 1e-15) {
    const auto [lo, hi] = norm_stats(state);
    traj.times.push_back(t);
    traj.states.push_back(state);
    min_col.push_back(group_min);
    ratio_col.push_back(hi / lo);
  }
  return traj;
}

namespace {

std::vector<Mat> rk4_step_rotations(
    const std::vector<Mat>& y, double h,
    const std::function<std::vector<Mat>(const std::vector<Mat>&)>& f) {
  const auto axpy = [](const std::vector<Mat>& base, double a,
                       const std::vector<Mat>& dir) {
    std::vector<Mat> out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + a * dir[i];
    return out;
  };
  const std::vector<Mat> k1 = f(y);
  const std::vector<Mat> k2 = f(axpy(y, 0.5 * h, k1));
  const std::vector<Mat> k3 = f(axpy(y, 0.5 * h, k2));
  const std::vector<Mat> k4 = f(axpy(y, h, k3));
  std::vector<Mat> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// Nearest rotation in Frobenius norm via SVD; the determinant fix keeps
// the result in SO(d) even for large drift.
Mat polar_retract(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat u = svd.matrixU();
  const Mat v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(u.cols() - 1) *= -1.0;
  return u * v.transpose();
}

}  // namespace

RotationTrajectory integrate_rotations(const std::vector<Rotation>& r0,
                                       const GraphSchedule& schedule,
                                       const WeightFamily& weights,
                                       const IntegrationConfig& config) {
  validate_config(config, schedule);
  if (r0.empty()) throw DimensionError("integrate_rotations: empty ensemble");
  RotationTrajectory traj;
  traj.dim = r0[0].dim();
  traj.agents = static_cast<int>(r0.size());
  traj.events = schedule.switch_times_between(config.t0, config.tf);

  std::vector<Mat> state;
  state.reserve(r0.size());
  for (const Rotation& r : r0) {
    if (r.dim() != traj.dim)
      throw DimensionError("integrate_rotations: mixed dimensions");
    state.push_back(r.matrix());
  }
  double t = config.t0;
  traj.times.push_back(t);
  traj.states.push_back(state);
  auto& drift_col = traj.diagnostics["ortho_drift"];
  drift_col.push_back(0.0);

  std::size_t sw = 0;
  int since_record = 0;
  double drift_acc = 0.0;
  const Mat eye = Mat::Identity(traj.dim, traj.dim);
  while (t < config.tf - 1e-15) {
    const double t_next =
        next_boundary(t, config.dt, config.tf, traj.events, sw);
    const DirectedGraph& g = graph_at(schedule, t);
    std::vector<Mat> next =
        rk4_step_rotations(state, t_next - t, [&](const std::vector<Mat>& s) {
          return rotation_field_ambient(s, g, weights);
        });
    bool finite = true;
    double drift = 0.0;
    for (Mat& r : next) {
      if (!r.allFinite()) {
        finite = false;
        break;
      }
      drift = std::max(drift,
                       (r.transpose() * r - eye).cwiseAbs().maxCoeff());
      if (config.renormalize) r = polar_retract(r);
    }
    if (!finite) {
      traj.aborted = true;
      traj.abort_reason = "non-finite state";
      traj.abort_time = t_next;
      break;
    }
    drift_acc = std::max(drift_acc, drift);
    state = std::move(next);
    t = t_next;
    ++since_record;
    if (since_record >= config.record_stride || t >= config.tf - 1e-15) {
      traj.times.push_back(t);
      traj.states.push_back(state);
      drift_col.push_back(drift_acc);
      drift_acc = 0.0;
      since_record = 0;
    }
  }
  return traj;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::string out = "time,agent";
  for (int k = 0; k < traj.dim; ++k) {
    out += ",coord_";
    out += std::to_string(k);
  }
  out += "\n";
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    for (int i = 0; i < traj.agents; ++i) {
      append_number(out, traj.times[s]);
      out += ",";
      out += std::to_string(i);
      for (int k = 0; k < traj.dim; ++k) {
        out += ",";
        append_number(out, traj.states[s](k, i));
      }
      out += "\n";
    }
  }
  return out;
}

std::string diagnostics_to_csv(const Trajectory& traj) {
  std::string out = "time";
  for (const auto& [name, col] : traj.diagnostics) {
    (void)col;
    out += ",";
    out += name;
  }
  out += "\n";
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    append_number(out, traj.times[s]);
    for (const auto& [name, col] : traj.diagnostics) {
      (void)name;
      out += ",";
      append_number(out, s < col.size() ? col[s] : 0.0);
    }
    out += "\n";
  }
  return out;
}

}  // namespace spheresync
