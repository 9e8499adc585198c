#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spheresync/integrate.hpp"

namespace spheresync {

enum class Verdict { pass, fail, not_applicable };

std::string to_string(Verdict v);

/// One monitored quantity along a trajectory, with its verdict. Values
/// are aligned with the trajectory samples that produced them.
struct MetricSeries {
  std::string name;
  std::vector<double> times;
  std::vector<double> values;
  Verdict verdict = Verdict::not_applicable;
  std::optional<double> first_violation_time;
  /// Short human-readable detail: violating agent, or why the monitor
  /// did not apply.
  std::string witness;
};

/// Max pairwise chordal distance. Zero exactly on the consensus set,
/// bounded by 2 for unit states; used as the distance-to-consensus
/// surrogate throughout.
double ensemble_diameter(const Mat& states);
double consensus_diameter(const SphereEnsemble& x);

/// Pass iff every sampled state stays within `radius` (+1e-9 slack) of
/// `center` in geodesic distance. Not applicable when the initial states
/// are not all inside the ball, or the ball is not strictly inside an
/// open hemisphere (radius >= pi/2).
MetricSeries monitor_hemisphere_invariance(const Trajectory& traj,
                                           const UnitVector& center,
                                           double radius);

/// Pass iff max_i ||y_i||^2 is nonincreasing (1e-9 slack per recorded
/// step), where y_i drops the first coordinate of the sphere states.
/// Not applicable unless all initial states are strictly northern.
MetricSeries monitor_max_norm_lyapunov(const Trajectory& traj);

/// Pass iff max_{i,j} ||z_i - z_j||^2 is nonincreasing (1e-9 slack per
/// recorded step). Not applicable when the origin lies in the initial
/// convex hull.
MetricSeries monitor_pairwise_lyapunov(const Trajectory& traj);

/// Pass iff the norm ratio V(t) = max_i ||z_i|| / min_j ||z_j|| satisfies
/// V(t) <= exp(3 alpha n (t - t0)) V(t0) (1 + 1e-6) at every sample.
/// Compared in the log domain so large exponents cannot overflow.
MetricSeries monitor_ratio_bound(const Trajectory& traj, double alpha);

/// Pass iff every sampled state stays within 1e-7 of the convex hull of
/// the initial states (minimum-norm-point distance).
MetricSeries monitor_hull_invariance(const Trajectory& traj);

struct PointConvergence {
  MetricSeries series;
  /// Mean terminal state, the estimated common limit.
  Vec limit;
};

/// Pass iff over the trailing 10% of the horizon both the ensemble
/// diameter and every agent's displacement from its terminal state stay
/// below 1e-6.
PointConvergence monitor_point_convergence(const Trajectory& traj);

/// Pass iff the ensemble diameter is below 1e-5 at the final sample.
/// Not applicable when the weight family declares no positive lower
/// bound, or the origin is not in the initial hull.
MetricSeries monitor_origin_attraction(const Trajectory& traj,
                                       const WeightFamily& weights);

/// JSON array of {monitor, verdict, first_violation_time?, witness?}.
std::string verdicts_to_json(const std::vector<MetricSeries>& series);

struct GuasEpsilonEntry {
  double epsilon = 0.0;
  /// Item 1: every batch run eventually stays below epsilon.
  bool attained = false;
  /// T(epsilon): latest first-entry time across the batch.
  double attraction_time = 0.0;
  /// Item 2: largest tested initial spread whose runs never exceed
  /// epsilon; absent when no tested spread qualifies.
  std::optional<double> delta;
  bool delta_ok = false;
};

struct GuasReport {
  int batch = 0;
  std::vector<GuasEpsilonEntry> entries;
  bool all_pass = false;
  /// The report is sampling evidence over a finite batch, never a proof;
  /// this note says so in every artifact.
  std::string note;
};

/// Empirical two-part stability check over a seeded batch. `runner`
/// integrates one realization: the seed varies across the batch and
/// `scale` in (0, 1] shrinks the initial spread. Diameters of the
/// returned trajectories drive both the attraction-time search (at scale
/// 1) and the delta-epsilon containment check (at each delta scale).
GuasReport certify_guas(
    const std::function<Trajectory(std::uint64_t, double)>& runner,
    const std::vector<double>& epsilons,
    const std::vector<double>& delta_scales, int batch = 64);

std::string guas_report_to_json(const GuasReport& report);

}  // namespace spheresync
