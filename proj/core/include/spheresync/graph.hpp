#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spheresync/errors.hpp"

namespace spheresync {

/// Directed graph on nodes 0..n-1. An edge (i, j) means j is a neighbor
/// of i, i.e. agent i measures agent j's state. All reachability below
/// follows edge direction: "i is connected to j" means a directed path
/// from i to j exists.
class DirectedGraph {
public:
  using Edge = std::pair<int, int>;

  DirectedGraph(int node_count, std::vector<Edge> edges);

  int node_count() const { return node_count_; }

  /// Sorted, deduplicated edge list.
  const std::vector<Edge>& edges() const { return edges_; }

  /// N_i: targets of edges leaving i, sorted.
  const std::vector<int>& neighbors_of(int i) const;

  bool has_edge(int i, int j) const;

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

private:
  int node_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

/// Piecewise-constant, right-continuous graph-valued signal. Segment k is
/// active on [start_k, start_{k+1}); the last segment extends to the
/// horizon. tau_d lower-bounds the gap between consecutive switches and
/// window is the length T over which union graphs are examined.
class GraphSchedule {
public:
  struct Segment {
    double start;
    DirectedGraph graph;
  };

  GraphSchedule(int node_count, std::vector<Segment> segments, double tau_d,
                double window,
                std::optional<double> horizon = std::nullopt);

  int node_count() const { return node_count_; }
  double tau_d() const { return tau_d_; }
  double window() const { return window_; }

  /// End of the examined time range; defaults to last start + window.
  double horizon() const { return horizon_; }

  double start_time() const { return segments_.front().start; }
  const std::vector<Segment>& segments() const { return segments_; }

  /// Switch times lying strictly inside (t1, t2), ascending.
  std::vector<double> switch_times_between(double t1, double t2) const;

private:
  int node_count_;
  std::vector<Segment> segments_;
  double tau_d_;
  double window_;
  double horizon_;
};

enum class ConnectivityMode { strong, quasi_strong };

std::string to_string(ConnectivityMode mode);
ConnectivityMode connectivity_mode_from_string(const std::string& name);

/// The active graph at time t (right-continuous: at a switch instant the
/// new graph is already in force). t must not precede the first segment.
const DirectedGraph& graph_at(const GraphSchedule& schedule, double t);

/// Union of the edge sets of all segments whose active interval meets
/// [t1, t2). A segment starting exactly at t2 is excluded.
DirectedGraph union_graph(const GraphSchedule& schedule, double t1, double t2);

/// Every node reaches every other node along directed edges.
bool is_strongly_connected(const DirectedGraph& g);

/// A root: a node every other node is connected TO. Returns the smallest
/// such node index, or nullopt if none exists.
std::optional<int> is_quasi_strongly_connected(const DirectedGraph& g);

struct UniformityReport {
  bool uniform = false;
  /// Earliest anchor t whose window [t, t+T) fails, when not uniform.
  std::optional<double> first_failing_anchor;
  /// Anchors examined (for reporting).
  int anchors_checked = 0;
};

/// Checks union graphs over [t, t+T) for every anchor t at a segment
/// start or on a T/10 grid, restricted to windows that fit before the
/// schedule horizon.
UniformityReport is_uniformly_connected(const GraphSchedule& schedule,
                                        ConnectivityMode mode);

/// Schedule that is uniformly connected in the requested mode by
/// construction: a spanning structure (in-tree for quasi_strong, cycle
/// for strong) is dealt out across three rotating segments, plus a few
/// random extra edges per segment. Switches every switch_period until
/// horizon; tau_d = switch_period, T = 3 * switch_period.
GraphSchedule random_schedule(int node_count, double switch_period,
                              double horizon, ConnectivityMode mode,
                              std::uint64_t seed);

/// JSON round-trip. Schema:
///   {"n": int, "tau_D": s, "T": s,
///    "segments": [{"t": s, "edges": [[i, j], ...]}, ...],
///    "horizon": s (optional)}
std::string schedule_to_json(const GraphSchedule& schedule);
GraphSchedule schedule_from_json(const std::string& text);

}  // namespace spheresync
