#pragma once

#include <vector>

#include "spheresync/geometry.hpp"
#include "spheresync/graph.hpp"
#include "spheresync/weights.hpp"

namespace spheresync {

/// World-frame closed loop on the sphere:
///   xdot_i = (I - x_i x_i^T) sum_{j in N_i} f_ij(||x_j - x_i||) (x_j - x_i).
/// Columns of the result are tangent to the corresponding states.
Mat sphere_field(const SphereEnsemble& x, double t, const GraphSchedule& schedule,
                 const WeightFamily& weights);
Mat sphere_field(const SphereEnsemble& x, const DirectedGraph& g,
                 const WeightFamily& weights);

/// Smooth ambient extension of sphere_field evaluated at arbitrary
/// (not necessarily unit) columns. This is what integrator stages use.
Mat sphere_field_ambient(const Mat& x, const DirectedGraph& g,
                         const WeightFamily& weights);

/// Body-frame controller of agent i: the relative measurements are
/// x_ij = R_i^T R_j p, and
///   [0; v_i] = blockdiag(0, I_{d-1}) sum_{j in N_i} f_ij(||x_ij - p||) x_ij.
/// Returns v_i (length d-1).
Vec body_controller(int i, const std::vector<Rotation>& rotations, double t,
                    const GraphSchedule& schedule, const WeightFamily& weights);
Vec body_controller(int i, const std::vector<Rotation>& rotations,
                    const DirectedGraph& g, const WeightFamily& weights);

/// Attitude flow Rdot_i = R_i * Omega(v_i) with
///   Omega(v) = [[0, -v^T], [v, 0]] in so(d).
std::vector<Mat> rotation_field(const std::vector<Rotation>& rotations, double t,
                                const GraphSchedule& schedule,
                                const WeightFamily& weights);
std::vector<Mat> rotation_field(const std::vector<Rotation>& rotations,
                                const DirectedGraph& g,
                                const WeightFamily& weights);

/// Ambient extension over raw matrices for integrator stages.
std::vector<Mat> rotation_field_ambient(const std::vector<Mat>& rotations,
                                        const DirectedGraph& g,
                                        const WeightFamily& weights);

/// Lifted flow on (R^d \ {0})^n:
///   zdot_i = sum_{j in N_i} f_ij(||zhat_j - zhat_i||) (||z_i||/||z_j||)
///            (z_j - z_i),   zhat = z/||z||.
/// Throws ZeroNormError naming the offending agent when a norm falls to
/// the zero guard.
Mat lifted_field(const LiftedEnsemble& z, double t, const GraphSchedule& schedule,
                 const WeightFamily& weights);
Mat lifted_field(const LiftedEnsemble& z, const DirectedGraph& g,
                 const WeightFamily& weights);
Mat lifted_field_ambient(const Mat& z, const DirectedGraph& g,
                         const WeightFamily& weights);

/// Consensus form in the gnomonic chart: the push-forward of the sphere
/// field through the chart, evaluated by the chain rule at the lifted
/// points. Columns of y are tangent-plane coordinates (length d-1).
Mat gnomonic_field(const Mat& y, double t, const GraphSchedule& schedule,
                   const WeightFamily& weights);
Mat gnomonic_field(const Mat& y, const DirectedGraph& g,
                   const WeightFamily& weights);

/// Closed-form rate of V = ||y_i||^2 along the equatorial projection of
/// the sphere flow, with lifts a_k = sqrt(1 - ||y_k||^2):
///   Vdot = 2 sum_{j in N_i} f_ij(dist) (a_i^2 y_i.y_j - a_i a_j ||y_i||^2),
///   dist = sqrt((a_j - a_i)^2 + ||y_j - y_i||^2).
/// Columns of y must lie in the open unit disc.
double equatorial_lyapunov_rate(int i, const Mat& y, double t,
                                const GraphSchedule& schedule,
                                const WeightFamily& weights);
double equatorial_lyapunov_rate(int i, const Mat& y, const DirectedGraph& g,
                                const WeightFamily& weights);

}  // namespace spheresync
