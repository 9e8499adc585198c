#include "spheresync/weights.hpp"

#include <algorithm>
#include <cmath>

#include "spheresync/rng.hpp"

namespace spheresync {

WeightFamily WeightFamily::constant(double a) {
  if (!(a > 0.0)) throw ConfigError("WeightFamily::constant: gain must be positive");
  WeightBounds b;
  b.lower_bound = a;
  b.upper_bound = a;
  b.global_upper = a;
  b.lipschitz = 0.0;
  return WeightFamily("constant(" + std::to_string(a) + ")",
                      [a](double) { return a; }, b);
}

WeightFamily WeightFamily::identity() {
  WeightBounds b;
  b.lower_bound = std::nullopt;  // f(0) = 0: no positive floor on [0, 2]
  b.upper_bound = 2.0;
  b.global_upper = 2.0;
  b.lipschitz = 1.0;
  return WeightFamily("identity", [](double s) { return s; }, b);
}

WeightFamily WeightFamily::bounded_rational() {
  WeightBounds b;
  b.lower_bound = std::nullopt;
  b.upper_bound = 2.0 / 3.0;
  b.global_upper = 2.0 / 3.0;
  b.lipschitz = 1.0;  // f'(s) = 1/(1+s)^2 <= 1
  return WeightFamily("bounded_rational", [](double s) { return s / (1.0 + s); },
                      b);
}

WeightFamily WeightFamily::edge_constants(
    std::map<std::pair<int, int>, double> values, double fallback) {
  if (!(fallback > 0.0))
    throw ConfigError("WeightFamily::edge_constants: fallback must be positive");
  double lo = fallback;
  double hi = fallback;
  for (const auto& [edge, v] : values) {
    (void)edge;
    if (!(v > 0.0))
      throw ConfigError("WeightFamily::edge_constants: gains must be positive");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  WeightBounds b;
  b.lower_bound = lo;
  b.upper_bound = hi;
  b.global_upper = hi;
  b.lipschitz = 0.0;
  return WeightFamily("edge_constants", std::move(values), fallback, b);
}

WeightFamily WeightFamily::random_edge_constants(int node_count, double low,
                                                 double high,
                                                 std::uint64_t seed) {
  if (node_count < 1 || !(low > 0.0) || !(high >= low))
    throw ConfigError("WeightFamily::random_edge_constants: need n >= 1, 0 < low <= high");
  Rng rng(seed);
  std::map<std::pair<int, int>, double> values;
  double achieved_min = high;
  for (int i = 0; i < node_count; ++i)
    for (int j = 0; j < node_count; ++j)
      if (i != j) {
        const double v = rng.uniform(low, high);
        values[{i, j}] = v;
        achieved_min = std::min(achieved_min, v);
      }
  // The table covers every ordered pair, so the fallback never fires;
  // using the achieved minimum keeps the declared bounds tight.
  WeightFamily fam = edge_constants(std::move(values), achieved_min);
  fam.name_ = "random_edge_constants";
  return fam;
}

WeightFamily WeightFamily::custom(std::string name, Fn f, WeightBounds bounds) {
  if (!f) throw ConfigError("WeightFamily::custom: empty function");
  return WeightFamily(std::move(name), std::move(f), bounds);
}

double WeightFamily::operator()(int i, int j, double s) const {
  if (s < 0.0) throw Error("WeightFamily: negative argument");
  if (tabular_) {
    const auto it = table_.find({i, j});
    return it == table_.end() ? fallback_ : it->second;
  }
  return fn_(s);
}

WeightFamily WeightFamily::scaled_by(double c) const {
  if (!(c > 0.0)) throw ConfigError("WeightFamily::scaled_by: factor must be positive");
  WeightBounds b = bounds_;
  if (b.lower_bound) b.lower_bound = *b.lower_bound * c;
  b.upper_bound *= c;
  b.global_upper *= c;
  b.lipschitz *= c;
  const std::string name = name_ + "*" + std::to_string(c);
  if (tabular_) {
    std::map<std::pair<int, int>, double> t = table_;
    for (auto& [edge, v] : t) {
      (void)edge;
      v *= c;
    }
    return WeightFamily(name, std::move(t), fallback_ * c, b);
  }
  Fn base = fn_;
  return WeightFamily(name, [base, c](double s) { return c * base(s); }, b);
}

}  // namespace spheresync
