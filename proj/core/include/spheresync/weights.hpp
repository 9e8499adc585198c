#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "spheresync/errors.hpp"

namespace spheresync {

/// Declared bounds for a weight family. The coupling arguments are chord
/// distances of unit vectors, so [0, 2] is the compact set of record.
struct WeightBounds {
  /// K_d: positive floor of f on (0, 2], when the family declares one.
  std::optional<double> lower_bound;
  /// K_u: maximum of f over [0, 2].
  double upper_bound = 0.0;
  /// alpha: global upper bound on attainable weight values (ratio monitor).
  double global_upper = 0.0;
  /// Lipschitz constant of f on [0, 2].
  double lipschitz = 0.0;
};

/// The per-edge coupling gains f_ij. A family is either one function used
/// on every edge or a table of positive per-edge constants. f_ij(s) must
/// be positive for s > 0 and Lipschitz on [0, 2].
class WeightFamily {
public:
  using Fn = std::function<double(double)>;

  /// f(s) = a on every edge, a > 0.
  static WeightFamily constant(double a);
  /// f(s) = s.
  static WeightFamily identity();
  /// f(s) = s / (1 + s).
  static WeightFamily bounded_rational();
  /// Per-edge positive constants; edges absent from the table use the
  /// fallback value.
  static WeightFamily edge_constants(
      std::map<std::pair<int, int>, double> values, double fallback = 1.0);
  /// Per-edge constants drawn uniformly from [low, high], one value per
  /// ordered pair of the n nodes.
  static WeightFamily random_edge_constants(int node_count, double low,
                                            double high, std::uint64_t seed);
  /// User function with caller-declared bounds.
  static WeightFamily custom(std::string name, Fn f, WeightBounds bounds);

  /// Gain on edge (i, j) at argument s >= 0.
  double operator()(int i, int j, double s) const;
  double eval(int i, int j, double s) const { return (*this)(i, j, s); }

  const WeightBounds& bounds() const { return bounds_; }
  const std::string& name() const { return name_; }

  /// Same family with every gain multiplied by c > 0.
  WeightFamily scaled_by(double c) const;

private:
  WeightFamily(std::string name, Fn fn, WeightBounds bounds)
      : name_(std::move(name)), fn_(std::move(fn)), bounds_(bounds) {}
  WeightFamily(std::string name, std::map<std::pair<int, int>, double> table,
               double fallback, WeightBounds bounds)
      : name_(std::move(name)),
        table_(std::move(table)),
        fallback_(fallback),
        tabular_(true),
        bounds_(bounds) {}

  std::string name_;
  Fn fn_;
  std::map<std::pair<int, int>, double> table_;
  double fallback_ = 1.0;
  bool tabular_ = false;
  WeightBounds bounds_;
};

}  // namespace spheresync
