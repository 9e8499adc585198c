#include "spheresync/dynamics.hpp"

#include <cmath>

namespace spheresync {

namespace {

void check_graph(int agents, const DirectedGraph& g, const char* where) {
  if (g.node_count() != agents)
    throw DimensionError(std::string(where) + ": graph size does not match ensemble");
}

}  // namespace

Mat sphere_field_ambient(const Mat& x, const DirectedGraph& g,
                         const WeightFamily& weights) {
  const int n = static_cast<int>(x.cols());
  check_graph(n, g, "sphere_field");
  Mat out = Mat::Zero(x.rows(), n);
  for (int i = 0; i < n; ++i) {
    Vec u = Vec::Zero(x.rows());
    for (int j : g.neighbors_of(i)) {
      const Vec diff = x.col(j) - x.col(i);
      u += weights(i, j, diff.norm()) * diff;
    }
    out.col(i) = u - x.col(i) * (x.col(i).dot(u));
  }
  return out;
}

Mat sphere_field(const SphereEnsemble& x, const DirectedGraph& g,
                 const WeightFamily& weights) {
  return sphere_field_ambient(x.states(), g, weights);
}

Mat sphere_field(const SphereEnsemble& x, double t, const GraphSchedule& schedule,
                 const WeightFamily& weights) {
  return sphere_field(x, graph_at(schedule, t), weights);
}

namespace {

Vec body_controller_ambient(int i, const std::vector<Mat>& rotations,
                            const DirectedGraph& g, const WeightFamily& weights) {
  const int n = static_cast<int>(rotations.size());
  check_graph(n, g, "body_controller");
  if (i < 0 || i >= n) throw DimensionError("body_controller: agent out of range");
  const int d = static_cast<int>(rotations[i].rows());
  Vec u = Vec::Zero(d);
  for (int j : g.neighbors_of(i)) {
    // x_ij = R_i^T R_j p with p the north pole: R_j p is column 0.
    const Vec x_ij = rotations[i].transpose() * rotations[j].col(0);
    Vec rel = x_ij;
    rel[0] -= 1.0;  // x_ij - p
    u += weights(i, j, rel.norm()) * x_ij;
  }
  return u.tail(d - 1);
}

}  // namespace

Vec body_controller(int i, const std::vector<Rotation>& rotations,
                    const DirectedGraph& g, const WeightFamily& weights) {
  std::vector<Mat> raw;
  raw.reserve(rotations.size());
  for (const Rotation& r : rotations) raw.push_back(r.matrix());
  return body_controller_ambient(i, raw, g, weights);
}

Vec body_controller(int i, const std::vector<Rotation>& rotations, double t,
                    const GraphSchedule& schedule, const WeightFamily& weights) {
  return body_controller(i, rotations, graph_at(schedule, t), weights);
}

std::vector<Mat> rotation_field_ambient(const std::vector<Mat>& rotations,
                                        const DirectedGraph& g,
                                        const WeightFamily& weights) {
  const int n = static_cast<int>(rotations.size());
  check_graph(n, g, "rotation_field");
  std::vector<Mat> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int d = static_cast<int>(rotations[i].rows());
    const Vec v = body_controller_ambient(i, rotations, g, weights);
    Mat omega = Mat::Zero(d, d);
    omega.block(1, 0, d - 1, 1) = v;
    omega.block(0, 1, 1, d - 1) = -v.transpose();
    out.push_back(rotations[i] * omega);
  }
  return out;
}

std::vector<Mat> rotation_field(const std::vector<Rotation>& rotations,
                                const DirectedGraph& g,
                                const WeightFamily& weights) {
  std::vector<Mat> raw;
  raw.reserve(rotations.size());
  for (const Rotation& r : rotations) raw.push_back(r.matrix());
  return rotation_field_ambient(raw, g, weights);
}

std::vector<Mat> rotation_field(const std::vector<Rotation>& rotations, double t,
                                const GraphSchedule& schedule,
                                const WeightFamily& weights) {
  return rotation_field(rotations, graph_at(schedule, t), weights);
}

Mat lifted_field_ambient(const Mat& z, const DirectedGraph& g,
                         const WeightFamily& weights) {
  const int n = static_cast<int>(z.cols());
  check_graph(n, g, "lifted_field");
  Vec norms(n);
  for (int i = 0; i < n; ++i) {
    norms[i] = z.col(i).norm();
    if (norms[i] <= kZeroGuard)
      throw ZeroNormError("lifted_field: agent norm at or below zero guard", i);
  }
  Mat out = Mat::Zero(z.rows(), n);
  for (int i = 0; i < n; ++i) {
    Vec u = Vec::Zero(z.rows());
    for (int j : g.neighbors_of(i)) {
      const Vec dir = z.col(j) / norms[j] - z.col(i) / norms[i];
      u += weights(i, j, dir.norm()) * (norms[i] / norms[j]) * (z.col(j) - z.col(i));
    }
    out.col(i) = u;
  }
  return out;
}

Mat lifted_field(const LiftedEnsemble& z, const DirectedGraph& g,
                 const WeightFamily& weights) {
  return lifted_field_ambient(z.states(), g, weights);
}

Mat lifted_field(const LiftedEnsemble& z, double t, const GraphSchedule& schedule,
                 const WeightFamily& weights) {
  return lifted_field(z, graph_at(schedule, t), weights);
}

Mat gnomonic_field(const Mat& y, const DirectedGraph& g,
                   const WeightFamily& weights) {
  const int n = static_cast<int>(y.cols());
  const int d = static_cast<int>(y.rows()) + 1;
  check_graph(n, g, "gnomonic_field");
  Mat x(d, n);
  for (int i = 0; i < n; ++i) x.col(i) = gnomonic_lift(y.col(i)).coords();
  const Mat u = sphere_field_ambient(x, g, weights);
  // Chart differential of y = -x_r / x_1 along xdot = u:
  //   ydot = -u_r / x_1 + x_r u_1 / x_1^2.
  Mat out(d - 1, n);
  for (int i = 0; i < n; ++i) {
    const double x1 = x(0, i);
    out.col(i) = -u.col(i).tail(d - 1) / x1 +
                 x.col(i).tail(d - 1) * (u(0, i) / (x1 * x1));
  }
  return out;
}

Mat gnomonic_field(const Mat& y, double t, const GraphSchedule& schedule,
                   const WeightFamily& weights) {
  return gnomonic_field(y, graph_at(schedule, t), weights);
}

double equatorial_lyapunov_rate(int i, const Mat& y, const DirectedGraph& g,
                                const WeightFamily& weights) {
  const int n = static_cast<int>(y.cols());
  check_graph(n, g, "equatorial_lyapunov_rate");
  if (i < 0 || i >= n)
    throw DimensionError("equatorial_lyapunov_rate: agent out of range");
  Vec lifts(n);
  for (int k = 0; k < n; ++k) {
    const double s = y.col(k).squaredNorm();
    if (s >= 1.0)
      throw OutOfDiscError("equatorial_lyapunov_rate: state outside the open disc");
    lifts[k] = std::sqrt(1.0 - s);
  }
  const double a_i = lifts[i];
  const double s_i = y.col(i).squaredNorm();
  double rate = 0.0;
  for (int j : g.neighbors_of(i)) {
    const double da = lifts[j] - a_i;
    const double dist = std::sqrt(da * da + (y.col(j) - y.col(i)).squaredNorm());
    rate += 2.0 * weights(i, j, dist) *
            (a_i * a_i * y.col(i).dot(y.col(j)) - a_i * lifts[j] * s_i);
  }
  return rate;
}

double equatorial_lyapunov_rate(int i, const Mat& y, double t,
                                const GraphSchedule& schedule,
                                const WeightFamily& weights) {
  return equatorial_lyapunov_rate(i, y, graph_at(schedule, t), weights);
}

}  // namespace spheresync
