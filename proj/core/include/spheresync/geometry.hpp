#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "spheresync/errors.hpp"

namespace spheresync {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Unit-norm tolerance at construction; trajectory samples are held to the
/// looser bound after repeated renormalization.
inline constexpr double kUnitTolConstruct = 1e-12;
inline constexpr double kUnitTolTrajectory = 1e-9;

/// Orthogonality and determinant tolerance for rotation matrices.
inline constexpr double kOrthoTol = 1e-9;

/// Norms at or below this are treated as zero.
inline constexpr double kZeroGuard = 1e-14;

/// A point must sit at least this far below the equator to be chartable
/// by the gnomonic map.
inline constexpr double kHemisphereTol = 1e-10;

/// Minimum-norm-point solve tolerance, and the distance band inside which
/// the origin is declared on the hull boundary (conservatively: inside).
inline constexpr double kHullSolveTol = 1e-10;
inline constexpr double kHullBoundaryBand = 1e-8;

/// Smallest LP margin accepted as evidence of a strict common hemisphere.
inline constexpr double kHemisphereMargin = 1e-8;

/// A point on S^{d-1}, d >= 2. Coordinates are stored as given; the norm
/// must already be within `tol` of 1.
class UnitVector {
public:
  explicit UnitVector(Vec coords, double tol = kUnitTolConstruct);

  /// Standard basis vector e_k in R^d.
  static UnitVector axis(int d, int k);
  /// North pole p = e_1 (index 0).
  static UnitVector north_pole(int d) { return axis(d, 0); }
  static UnitVector south_pole(int d);

  int dim() const { return static_cast<int>(coords_.size()); }
  const Vec& coords() const { return coords_; }
  double operator[](int k) const { return coords_[k]; }

private:
  Vec coords_;
};

/// Element of SO(d). When owned by a body-frame agent, column 0 is the
/// agent's sphere point (R p = x with p the north pole).
class Rotation {
public:
  explicit Rotation(Mat matrix, double tol = kOrthoTol);

  static Rotation identity(int d);

  /// Deterministic completion of x to a rotation with first column x.
  /// (The completion is not unique; any orthonormal complement works.)
  static Rotation from_pole(const UnitVector& x);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Mat& matrix() const { return matrix_; }

  /// First column, the sphere point this attitude represents.
  UnitVector pole() const;

  Vec apply(const Vec& v) const;

private:
  Mat matrix_;
};

/// A nonzero ambient vector z in R^d.
class LiftedVector {
public:
  explicit LiftedVector(Vec coords, double guard = kZeroGuard);

  int dim() const { return static_cast<int>(coords_.size()); }
  const Vec& coords() const { return coords_; }
  double norm() const { return coords_.norm(); }

private:
  Vec coords_;
};

/// n sphere states stored column-wise in a d x n matrix.
class SphereEnsemble {
public:
  SphereEnsemble(Mat states, double tol = kUnitTolConstruct);
  explicit SphereEnsemble(const std::vector<UnitVector>& states);

  int dim() const { return static_cast<int>(states_.rows()); }
  int size() const { return static_cast<int>(states_.cols()); }
  const Mat& states() const { return states_; }
  Vec column(int i) const { return states_.col(i); }
  UnitVector agent(int i) const;

private:
  Mat states_;
};

/// n nonzero ambient states stored column-wise in a d x n matrix.
class LiftedEnsemble {
public:
  LiftedEnsemble(Mat states, double guard = kZeroGuard);

  int dim() const { return static_cast<int>(states_.rows()); }
  int size() const { return static_cast<int>(states_.cols()); }
  const Mat& states() const { return states_; }
  Vec column(int i) const { return states_.col(i); }
  double min_norm() const;

private:
  Mat states_;
};

/// (I - x x^T) v, the component of v tangent to the sphere at x.
Vec tangent_project(const UnitVector& x, const Vec& v);

/// z / ||z||. Throws ZeroNormError when ||z|| <= kZeroGuard.
UnitVector sphere_project(const Vec& z);

/// Drop the first coordinate: x -> (x_2, ..., x_d).
Vec equatorial_project(const UnitVector& x);

/// Inverse chart onto the open northern hemisphere:
/// y -> (sqrt(1 - ||y||^2), y). Throws OutOfDiscError when ||y|| >= 1.
UnitVector equatorial_lift(const Vec& y);

/// Central projection of the open southern hemisphere onto the tangent
/// plane at the south pole: the image y satisfies (-1, y) || x.
/// Throws NotSouthernError when x_1 >= -kHemisphereTol.
Vec gnomonic_project(const UnitVector& x);

/// Inverse gnomonic chart: normalize((-1, y)).
UnitVector gnomonic_lift(const Vec& y);

/// Great-circle distance in radians.
double geodesic_distance(const UnitVector& a, const UnitVector& b);

/// Minimum-norm point of conv(points), its convex coefficients, and the
/// verdict on whether the origin lies inside (distance below the
/// boundary band counts as inside).
struct HullResult {
  Vec point;
  double distance = 0.0;
  Vec coefficients;
  bool contains_origin = false;
};

HullResult min_norm_point(const std::vector<Vec>& points,
                          double tol = kHullSolveTol);

bool origin_in_convex_hull(const std::vector<Vec>& points,
                           double tol = kHullSolveTol);

/// Euclidean distance from q to conv(points).
double hull_distance(const std::vector<Vec>& points, const Vec& q,
                     double tol = kHullSolveTol);

/// An axis v with v^T x_i > 0 for all i, found by maximizing the margin
/// min_i v^T x_i over the box ||v||_inf <= 1. Returns nullopt when the
/// best margin is not strictly positive (above kHemisphereMargin);
/// points exactly on a closed hemisphere boundary count as not strictly
/// contained.
std::optional<UnitVector> find_common_hemisphere(
    const std::vector<UnitVector>& points);

/// `count` points drawn uniformly from the closed geodesic cap of the
/// given angular radius (radians) about `axis`. Reproducible per seed.
std::vector<UnitVector> sample_cap(const UnitVector& axis,
                                   double angular_radius, int count,
                                   std::uint64_t seed);

}  // namespace spheresync
