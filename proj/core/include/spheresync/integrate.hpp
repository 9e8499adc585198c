#pragma once

#include <map>
#include <string>
#include <vector>

#include "spheresync/dynamics.hpp"

namespace spheresync {

/// Fixed-step settings. dt may not exceed tau_D / 10 so that no step can
/// straddle more than one switch; steps are additionally split exactly at
/// each switch time.
struct IntegrationConfig {
  double dt = 1e-3;
  double t0 = 0.0;
  double tf = 1.0;
  bool renormalize = true;
  int record_stride = 1;
};

/// Sampled solution. `states` holds one d x n matrix per sample. When a
/// run cannot continue (non-finite state, norm collapse) it is truncated
/// at the last valid sample and flagged instead of throwing.
struct Trajectory {
  int dim = 0;
  int agents = 0;
  std::vector<double> times;
  std::vector<Mat> states;
  /// Switch times crossed in (t0, tf).
  std::vector<double> events;
  /// Per-sample metric columns, keyed by name (alphabetical in CSV).
  std::map<std::string, std::vector<double>> diagnostics;
  bool aborted = false;
  std::string abort_reason;
  int abort_agent = -1;
  double abort_time = 0.0;

  const Mat& final_state() const { return states.back(); }
  double final_time() const { return times.back(); }
};

/// Sampled attitude solution; one rotation matrix per agent per sample.
struct RotationTrajectory {
  int dim = 0;
  int agents = 0;
  std::vector<double> times;
  std::vector<std::vector<Mat>> states;
  std::vector<double> events;
  std::map<std::string, std::vector<double>> diagnostics;
  bool aborted = false;
  std::string abort_reason;
  double abort_time = 0.0;
};

/// Classical RK4 with the active graph frozen per step (resolved at the
/// step's start, matching right-continuity) and step boundaries placed
/// exactly on switch times. After each step states are renormalized to
/// the sphere; the pre-renormalization drift is recorded per sample
/// under "renorm_drift".
Trajectory integrate_sphere(const SphereEnsemble& x0,
                            const GraphSchedule& schedule,
                            const WeightFamily& weights,
                            const IntegrationConfig& config);

/// Same stepping for the lifted flow; no renormalization. Records
/// "min_norm" (smallest agent norm seen since the previous sample) and
/// "ratio_V" (max_i ||z_i|| / min_j ||z_j|| at the sample). A zero-guard
/// hit ends the run at the last valid sample, flagged with the agent.
Trajectory integrate_lifted(const LiftedEnsemble& z0,
                            const GraphSchedule& schedule,
                            const WeightFamily& weights,
                            const IntegrationConfig& config);

/// Attitude flow integration; after each step every rotation is pulled
/// back to SO(d) by polar retraction. Records "ortho_drift".
RotationTrajectory integrate_rotations(const std::vector<Rotation>& r0,
                                       const GraphSchedule& schedule,
                                       const WeightFamily& weights,
                                       const IntegrationConfig& config);

/// CSV with header time,agent,coord_0..coord_{d-1}; one row per agent per
/// sample, numbers printed with 17 significant digits for bit-stable
/// round-trips.
std::string trajectory_to_csv(const Trajectory& traj);

/// CSV with header time,<metric names in alphabetical order>.
std::string diagnostics_to_csv(const Trajectory& traj);

}  // namespace spheresync
