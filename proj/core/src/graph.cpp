#include "spheresync/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "spheresync/rng.hpp"

namespace spheresync {

DirectedGraph::DirectedGraph(int node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ < 1)
    throw DimensionError("DirectedGraph: need at least one node");
  for (const Edge& e : edges_) {
    if (e.first < 0 || e.first >= node_count_ || e.second < 0 ||
        e.second >= node_count_)
      throw DimensionError("DirectedGraph: edge index out of range");
    if (e.first == e.second)
      throw DimensionError("DirectedGraph: self-loops are not allowed");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  adjacency_.assign(node_count_, {});
  for (const Edge& e : edges_) adjacency_[e.first].push_back(e.second);
}

const std::vector<int>& DirectedGraph::neighbors_of(int i) const {
  if (i < 0 || i >= node_count_)
    throw DimensionError("DirectedGraph::neighbors_of: node out of range");
  return adjacency_[i];
}

bool DirectedGraph::has_edge(int i, int j) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

GraphSchedule::GraphSchedule(int node_count, std::vector<Segment> segments,
                             double tau_d, double window,
                             std::optional<double> horizon)
    : node_count_(node_count),
      segments_(std::move(segments)),
      tau_d_(tau_d),
      window_(window),
      horizon_(0.0) {
  if (segments_.empty())
    throw ConfigError("GraphSchedule: need at least one segment");
  if (!(tau_d_ > 0.0) || !(window_ > 0.0))
    throw ConfigError("GraphSchedule: tau_D and T must be positive");
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    if (segments_[k].graph.node_count() != node_count_)
      throw ConfigError("GraphSchedule: segment node count mismatch");
    if (k > 0) {
      const double gap = segments_[k].start - segments_[k - 1].start;
      if (gap <= 0.0)
        throw ConfigError("GraphSchedule: segment starts must increase");
      if (gap < tau_d_ - 1e-12)
        throw ConfigError("GraphSchedule: switch gap below dwell bound tau_D");
    }
  }
  const double last = segments_.back().start;
  horizon_ = horizon.value_or(last + window_);
  if (horizon_ < last)
    throw ConfigError("GraphSchedule: horizon precedes the last segment");
}

std::vector<double> GraphSchedule::switch_times_between(double t1,
                                                        double t2) const {
  std::vector<double> out;
  for (std::size_t k = 1; k < segments_.size(); ++k) {
    const double s = segments_[k].start;
    if (s > t1 && s < t2) out.push_back(s);
  }
  return out;
}

std::string to_string(ConnectivityMode mode) {
  return mode == ConnectivityMode::strong ? "strong" : "quasi_strong";
}

ConnectivityMode connectivity_mode_from_string(const std::string& name) {
  if (name == "strong") return ConnectivityMode::strong;
  if (name == "quasi_strong") return ConnectivityMode::quasi_strong;
  throw ConfigError("unknown connectivity mode: " + name);
}

const DirectedGraph& graph_at(const GraphSchedule& schedule, double t) {
  const auto& segs = schedule.segments();
  if (t < segs.front().start)
    throw ConfigError("graph_at: time precedes the first segment");
  // Last segment with start <= t.
  std::size_t lo = 0;
  for (std::size_t k = 1; k < segs.size() && segs[k].start <= t; ++k) lo = k;
  return segs[lo].graph;
}

DirectedGraph union_graph(const GraphSchedule& schedule, double t1, double t2) {
  if (!(t1 < t2)) throw ConfigError("union_graph: need t1 < t2");
  const auto& segs = schedule.segments();
  std::set<DirectedGraph::Edge> acc;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const double seg_start = segs[k].start;
    const double seg_end = (k + 1 < segs.size())
                               ? segs[k + 1].start
                               : std::numeric_limits<double>::infinity();
    // Overlap of [seg_start, seg_end) with [t1, t2).
    if (seg_start < t2 && t1 < seg_end)
      acc.insert(segs[k].graph.edges().begin(), segs[k].graph.edges().end());
  }
  return DirectedGraph(schedule.node_count(),
                       std::vector<DirectedGraph::Edge>(acc.begin(), acc.end()));
}

namespace {

// Nodes reachable from src along edges, or along reversed edges.
std::vector<char> reachable(const DirectedGraph& g, int src, bool reverse) {
  const int n = g.node_count();
  std::vector<char> seen(n, 0);
  std::vector<int> stack{src};
  seen[src] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const auto& e : g.edges()) {
      const int from = reverse ? e.second : e.first;
      const int to = reverse ? e.first : e.second;
      if (from == u && !seen[to]) {
        seen[to] = 1;
        stack.push_back(to);
      }
    }
  }
  return seen;
}

bool all_true(const std::vector<char>& v) {
  return std::all_of(v.begin(), v.end(), [](char c) { return c != 0; });
}

}  // namespace

bool is_strongly_connected(const DirectedGraph& g) {
  if (g.node_count() == 1) return true;
  return all_true(reachable(g, 0, false)) && all_true(reachable(g, 0, true));
}

std::optional<int> is_quasi_strongly_connected(const DirectedGraph& g) {
  for (int r = 0; r < g.node_count(); ++r) {
    // r is a root when every node reaches r, i.e. reverse-reachability
    // from r covers the graph.
    if (all_true(reachable(g, r, true))) return r;
  }
  return std::nullopt;
}

UniformityReport is_uniformly_connected(const GraphSchedule& schedule,
                                        ConnectivityMode mode) {
  const double T = schedule.window();
  const double t0 = schedule.start_time();
  const double end = schedule.horizon();

  std::vector<double> anchors;
  for (const auto& seg : schedule.segments()) anchors.push_back(seg.start);
  for (double t = t0; t <= end - T + 1e-12; t += T / 10.0) anchors.push_back(t);
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                anchors.end());

  UniformityReport report;
  report.uniform = true;
  for (double t : anchors) {
    if (t + T > end + 1e-9) continue;  // window must fit inside the horizon
    ++report.anchors_checked;
    const DirectedGraph u = union_graph(schedule, t, t + T);
    const bool ok = (mode == ConnectivityMode::strong)
                        ? is_strongly_connected(u)
                        : is_quasi_strongly_connected(u).has_value();
    if (!ok) {
      report.uniform = false;
      report.first_failing_anchor = t;
      break;
    }
  }
  if (report.anchors_checked == 0) {
    report.uniform = false;
    report.first_failing_anchor = t0;
  }
  return report;
}

GraphSchedule random_schedule(int node_count, double switch_period,
                              double horizon, ConnectivityMode mode,
                              std::uint64_t seed) {
  if (node_count < 1) throw ConfigError("random_schedule: need n >= 1");
  if (!(switch_period > 0.0) || !(horizon > switch_period))
    throw ConfigError("random_schedule: need 0 < switch_period < horizon");
  Rng rng(seed);

  // Spanning skeleton whose edges are dealt across `groups` segments.
  std::vector<DirectedGraph::Edge> skeleton;
  if (mode == ConnectivityMode::strong) {
    std::vector<int> perm(node_count);
    for (int i = 0; i < node_count; ++i) perm[i] = i;
    for (int i = node_count - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i + 1))]);
    for (int i = 0; i < node_count && node_count > 1; ++i)
      skeleton.push_back({perm[i], perm[(i + 1) % node_count]});
  } else {
    const int root = static_cast<int>(rng.below(node_count));
    std::vector<int> attached{root};
    std::vector<int> rest;
    for (int i = 0; i < node_count; ++i)
      if (i != root) rest.push_back(i);
    for (int i = static_cast<int>(rest.size()) - 1; i > 0; --i)
      std::swap(rest[i], rest[rng.below(static_cast<std::uint64_t>(i + 1))]);
    for (int v : rest) {
      const int parent = attached[rng.below(attached.size())];
      skeleton.push_back({v, parent});  // v measures parent: path v -> root
      attached.push_back(v);
    }
  }

  const int groups = 3;
  std::vector<GraphSchedule::Segment> segments;
  for (int idx = 0; idx * switch_period < horizon - 1e-12; ++idx) {
    const double t = idx * switch_period;
    std::vector<DirectedGraph::Edge> edges;
    for (std::size_t e = 0; e < skeleton.size(); ++e)
      if (static_cast<int>(e) % groups == idx % groups)
        edges.push_back(skeleton[e]);
    // A little extra random traffic; extra edges never break rooted or
    // strong reachability of the union.
    const int extras = node_count > 1 ? static_cast<int>(rng.below(3)) : 0;
    for (int e = 0; e < extras; ++e) {
      const int i = static_cast<int>(rng.below(node_count));
      int j = static_cast<int>(rng.below(node_count));
      if (i == j) j = (j + 1) % node_count;
      edges.push_back({i, j});
    }
    segments.push_back({t, DirectedGraph(node_count, std::move(edges))});
  }
  return GraphSchedule(node_count, std::move(segments), switch_period,
                       groups * switch_period, horizon);
}

std::string schedule_to_json(const GraphSchedule& schedule) {
  nlohmann::json j;
  j["n"] = schedule.node_count();
  j["tau_D"] = schedule.tau_d();
  j["T"] = schedule.window();
  j["horizon"] = schedule.horizon();
  j["segments"] = nlohmann::json::array();
  for (const auto& seg : schedule.segments()) {
    nlohmann::json s;
    s["t"] = seg.start;
    s["edges"] = nlohmann::json::array();
    for (const auto& e : seg.graph.edges())
      s["edges"].push_back({e.first, e.second});
    j["segments"].push_back(std::move(s));
  }
  return j.dump(2);
}

GraphSchedule schedule_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schedule JSON parse failure: ") + e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    const double tau_d = j.at("tau_D").get<double>();
    const double window = j.at("T").get<double>();
    std::optional<double> horizon;
    if (j.contains("horizon")) horizon = j.at("horizon").get<double>();
    std::vector<GraphSchedule::Segment> segments;
    for (const auto& s : j.at("segments")) {
      std::vector<DirectedGraph::Edge> edges;
      for (const auto& e : s.at("edges")) {
        if (!e.is_array() || e.size() != 2)
          throw ConfigError("schedule JSON: edge must be a pair [i, j]");
        edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
      }
      segments.push_back({s.at("t").get<double>(), DirectedGraph(n, std::move(edges))});
    }
    return GraphSchedule(n, std::move(segments), tau_d, window, horizon);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schedule JSON structure invalid: ") + e.what());
  }
}

}  // namespace spheresync
