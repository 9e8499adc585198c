#include "spheresync/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spheresync/rng.hpp"

namespace spheresync {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}

}  // namespace

UnitVector::UnitVector(Vec coords, double tol) : coords_(std::move(coords)) {
  require(coords_.size() >= 2, "UnitVector: dimension must be at least 2");
  const double err = std::abs(coords_.norm() - 1.0);
  if (err > tol) throw Error("UnitVector: norm deviates from 1 beyond tolerance");
}

UnitVector UnitVector::axis(int d, int k) {
  require(d >= 2 && k >= 0 && k < d, "UnitVector::axis: index out of range");
  Vec v = Vec::Zero(d);
  v[k] = 1.0;
  return UnitVector(std::move(v));
}

UnitVector UnitVector::south_pole(int d) {
  Vec v = Vec::Zero(d);
  v[0] = -1.0;
  return UnitVector(std::move(v));
}

Rotation::Rotation(Mat matrix, double tol) : matrix_(std::move(matrix)) {
  require(matrix_.rows() == matrix_.cols() && matrix_.rows() >= 2,
          "Rotation: matrix must be square, d >= 2");
  const int d = static_cast<int>(matrix_.rows());
  const double ortho_err =
      (matrix_.transpose() * matrix_ - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  if (ortho_err > tol) throw Error("Rotation: matrix is not orthogonal");
  if (std::abs(matrix_.determinant() - 1.0) > tol)
    throw Error("Rotation: determinant is not +1");
}

Rotation Rotation::identity(int d) { return Rotation(Mat::Identity(d, d)); }

Rotation Rotation::from_pole(const UnitVector& x) {
  const int d = x.dim();
  Vec u = x.coords();
  u[0] -= 1.0;
  const double uu = u.squaredNorm();
  if (uu < 1e-300) return identity(d);
  // Householder reflection sending e1 to x has determinant -1; flipping
  // the last column restores det +1 without touching the first column.
  Mat m = Mat::Identity(d, d) - (2.0 / uu) * (u * u.transpose());
  m.col(d - 1) = -m.col(d - 1);
  return Rotation(std::move(m));
}

UnitVector Rotation::pole() const { return UnitVector(matrix_.col(0)); }

Vec Rotation::apply(const Vec& v) const {
  require(v.size() == matrix_.rows(), "Rotation::apply: dimension mismatch");
  return matrix_ * v;
}

LiftedVector::LiftedVector(Vec coords, double guard) : coords_(std::move(coords)) {
  require(coords_.size() >= 2, "LiftedVector: dimension must be at least 2");
  if (coords_.norm() <= guard)
    throw ZeroNormError("LiftedVector: norm at or below zero guard");
}

SphereEnsemble::SphereEnsemble(Mat states, double tol) : states_(std::move(states)) {
  require(states_.rows() >= 2 && states_.cols() >= 1,
          "SphereEnsemble: need d >= 2 and at least one agent");
  for (int i = 0; i < states_.cols(); ++i) {
    if (std::abs(states_.col(i).norm() - 1.0) > tol)
      throw Error("SphereEnsemble: agent state is not unit length");
  }
}

SphereEnsemble::SphereEnsemble(const std::vector<UnitVector>& states)
    : states_() {
  require(!states.empty(), "SphereEnsemble: need at least one agent");
  const int d = states[0].dim();
  Mat m(d, static_cast<int>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    require(states[i].dim() == d, "SphereEnsemble: mixed dimensions");
    m.col(static_cast<int>(i)) = states[i].coords();
  }
  states_ = std::move(m);
}

UnitVector SphereEnsemble::agent(int i) const {
  return UnitVector(states_.col(i), kUnitTolTrajectory);
}

LiftedEnsemble::LiftedEnsemble(Mat states, double guard) : states_(std::move(states)) {
  require(states_.rows() >= 2 && states_.cols() >= 1,
          "LiftedEnsemble: need d >= 2 and at least one agent");
  for (int i = 0; i < states_.cols(); ++i) {
    if (states_.col(i).norm() <= guard)
      throw ZeroNormError("LiftedEnsemble: agent state at or below zero guard", i);
  }
}

double LiftedEnsemble::min_norm() const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < states_.cols(); ++i) m = std::min(m, states_.col(i).norm());
  return m;
}

Vec tangent_project(const UnitVector& x, const Vec& v) {
  require(v.size() == x.dim(), "tangent_project: dimension mismatch");
  return v - x.coords() * (x.coords().dot(v));
}

UnitVector sphere_project(const Vec& z) {
  const double n = z.norm();
  if (n <= kZeroGuard)
    throw ZeroNormError("sphere_project: vector norm at or below zero guard");
  return UnitVector(z / n);
}

Vec equatorial_project(const UnitVector& x) {
  return x.coords().tail(x.dim() - 1);
}

UnitVector equatorial_lift(const Vec& y) {
  const double s = y.squaredNorm();
  if (s >= 1.0) throw OutOfDiscError("equatorial_lift: ||y|| >= 1");
  Vec x(y.size() + 1);
  x[0] = std::sqrt(1.0 - s);
  x.tail(y.size()) = y;
  return UnitVector(std::move(x));
}

Vec gnomonic_project(const UnitVector& x) {
  if (x[0] >= -kHemisphereTol)
    throw NotSouthernError("gnomonic_project: point not on open southern hemisphere");
  return x.coords().tail(x.dim() - 1) / (-x[0]);
}

UnitVector gnomonic_lift(const Vec& y) {
  Vec x(y.size() + 1);
  x[0] = -1.0;
  x.tail(y.size()) = y;
  x /= std::sqrt(1.0 + y.squaredNorm());
  return UnitVector(std::move(x));
}

double geodesic_distance(const UnitVector& a, const UnitVector& b) {
  require(a.dim() == b.dim(), "geodesic_distance: dimension mismatch");
  const double half_chord = 0.5 * (a.coords() - b.coords()).norm();
  return 2.0 * std::asin(std::min(1.0, half_chord));
}

namespace {

// Wolfe's minimum-norm-point algorithm over the convex hull of columns
// of P. Maintains a corral (affinely independent active set) and its
// convex coefficients; terminates when no vertex improves the support
// value x.p_j below x.x - tol.
struct MnpState {
  std::vector<int> active;
  Vec lambda;
};

Vec affine_minimizer(const Mat& pts, const std::vector<int>& active) {
  const int k = static_cast<int>(active.size());
  Mat sys(k + 1, k + 1);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      sys(a, b) = pts.col(active[a]).dot(pts.col(active[b]));
  for (int a = 0; a < k; ++a) {
    sys(a, k) = 1.0;
    sys(k, a) = 1.0;
  }
  sys(k, k) = 0.0;
  Vec rhs = Vec::Zero(k + 1);
  rhs[k] = 1.0;
  Vec sol = sys.fullPivLu().solve(rhs);
  return sol.head(k);
}

}  // namespace

HullResult min_norm_point(const std::vector<Vec>& points, double tol) {
  require(!points.empty(), "min_norm_point: need at least one point");
  const int d = static_cast<int>(points[0].size());
  const int m = static_cast<int>(points.size());
  Mat pts(d, m);
  for (int j = 0; j < m; ++j) {
    require(points[j].size() == d, "min_norm_point: mixed dimensions");
    pts.col(j) = points[j];
  }

  MnpState st;
  int start = 0;
  for (int j = 1; j < m; ++j)
    if (pts.col(j).squaredNorm() < pts.col(start).squaredNorm()) start = j;
  st.active = {start};
  st.lambda = Vec::Ones(1);
  Vec x = pts.col(start);

  const int max_outer = 100 + 20 * m;
  for (int outer = 0; outer < max_outer; ++outer) {
    int best = 0;
    double best_dot = x.dot(pts.col(0));
    for (int j = 1; j < m; ++j) {
      const double dj = x.dot(pts.col(j));
      if (dj < best_dot) {
        best_dot = dj;
        best = j;
      }
    }
    if (best_dot >= x.squaredNorm() - tol) break;
    if (std::find(st.active.begin(), st.active.end(), best) != st.active.end())
      break;  // no progress possible in floating point
    st.active.push_back(best);
    Vec lam(st.active.size());
    lam.head(st.lambda.size()) = st.lambda;
    lam[lam.size() - 1] = 0.0;
    st.lambda = lam;

    // Pull the coefficients to the affine minimizer, dropping vertices
    // whose weight would go negative, until a corral is reached.
    for (int inner = 0; inner < 2 * m + 10; ++inner) {
      Vec alpha = affine_minimizer(pts, st.active);
      const double eps = 1e-12;
      if ((alpha.array() > eps).all()) {
        st.lambda = alpha;
        break;
      }
      double theta = 1.0;
      for (int a = 0; a < alpha.size(); ++a) {
        if (alpha[a] <= eps && st.lambda[a] > alpha[a])
          theta = std::min(theta, st.lambda[a] / (st.lambda[a] - alpha[a]));
      }
      Vec mixed = (1.0 - theta) * st.lambda + theta * alpha;
      std::vector<int> keep_idx;
      std::vector<double> keep_lam;
      for (int a = 0; a < mixed.size(); ++a) {
        if (mixed[a] > eps) {
          keep_idx.push_back(st.active[a]);
          keep_lam.push_back(mixed[a]);
        }
      }
      if (keep_idx.empty()) {
        keep_idx.push_back(st.active[0]);
        keep_lam.push_back(1.0);
      }
      st.active = keep_idx;
      st.lambda = Eigen::Map<Vec>(keep_lam.data(), keep_lam.size());
      st.lambda /= st.lambda.sum();
    }
    x = Vec::Zero(d);
    for (int a = 0; a < static_cast<int>(st.active.size()); ++a)
      x += st.lambda[a] * pts.col(st.active[a]);
  }

  HullResult res;
  res.point = x;
  res.distance = x.norm();
  res.coefficients = Vec::Zero(m);
  for (int a = 0; a < static_cast<int>(st.active.size()); ++a)
    res.coefficients[st.active[a]] += st.lambda[a];
  res.contains_origin = res.distance < kHullBoundaryBand;
  return res;
}

bool origin_in_convex_hull(const std::vector<Vec>& points, double tol) {
  return min_norm_point(points, tol).contains_origin;
}

double hull_distance(const std::vector<Vec>& points, const Vec& q, double tol) {
  std::vector<Vec> shifted;
  shifted.reserve(points.size());
  for (const Vec& p : points) {
    require(p.size() == q.size(), "hull_distance: dimension mismatch");
    shifted.push_back(p - q);
  }
  return min_norm_point(shifted, tol).distance;
}

namespace {

// Dense primal simplex for max c.x subject to A x <= b, x >= 0 with
// b >= 0, so the all-slack basis is feasible. Bland's rule; fine for the
// small margin LPs this module needs.
struct SimplexResult {
  Vec x;
  double value = 0.0;
};

SimplexResult simplex_max(const Mat& a, const Vec& b, const Vec& c) {
  const int rows = static_cast<int>(a.rows());
  const int nv = static_cast<int>(a.cols());
  const int cols = nv + rows;
  Mat t = Mat::Zero(rows + 1, cols + 1);
  t.block(0, 0, rows, nv) = a;
  t.block(0, nv, rows, rows) = Mat::Identity(rows, rows);
  t.block(0, cols, rows, 1) = b;
  t.block(rows, 0, 1, nv) = c.transpose();

  std::vector<int> basis(rows);
  for (int i = 0; i < rows; ++i) basis[i] = nv + i;

  const double tol_cost = 1e-11;
  const double tol_pivot = 1e-9;
  const int max_pivots = 200 * (rows + cols);
  for (int it = 0; it < max_pivots; ++it) {
    int enter = -1;
    for (int j = 0; j < cols; ++j) {
      if (t(rows, j) > tol_cost) {
        enter = j;
        break;  // Bland: first improving column
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < rows; ++i) {
      if (t(i, enter) > tol_pivot) {
        const double ratio = t(i, cols) / t(i, enter);
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) break;  // unbounded; cannot happen with box bounds
    t.row(leave) /= t(leave, enter);
    for (int i = 0; i <= rows; ++i) {
      if (i == leave) continue;
      const double f = t(i, enter);
      if (f != 0.0) t.row(i) -= f * t.row(leave);
    }
    basis[leave] = enter;
  }

  SimplexResult res;
  res.x = Vec::Zero(nv);
  for (int i = 0; i < rows; ++i)
    if (basis[i] < nv) res.x[basis[i]] = t(i, cols);
  res.value = -t(rows, cols);
  return res;
}

}  // namespace

std::optional<UnitVector> find_common_hemisphere(
    const std::vector<UnitVector>& points) {
  require(!points.empty(), "find_common_hemisphere: need at least one point");
  const int d = points[0].dim();
  const int n = static_cast<int>(points.size());
  for (const UnitVector& p : points)
    require(p.dim() == d, "find_common_hemisphere: mixed dimensions");

  // Maximize the margin m of v.x_i >= m over the box ||v||_inf <= 1.
  // Substituting w = v + 1 (so w >= 0) and mu = m + sigma keeps every
  // right-hand side nonnegative, which makes the slack basis feasible.
  const double sigma = std::sqrt(static_cast<double>(d)) + 1.0;
  const int rows = n + d + 1;
  Mat a = Mat::Zero(rows, d + 1);
  Vec b(rows);
  for (int i = 0; i < n; ++i) {
    const Vec& xi = points[i].coords();
    a.block(i, 0, 1, d) = -xi.transpose();
    a(i, d) = 1.0;
    b[i] = sigma - xi.sum();
  }
  for (int k = 0; k < d; ++k) {
    a(n + k, k) = 1.0;
    b[n + k] = 2.0;
  }
  a(n + d, d) = 1.0;
  b[n + d] = 2.0 * sigma;
  Vec c = Vec::Zero(d + 1);
  c[d] = 1.0;

  const SimplexResult lp = simplex_max(a, b, c);
  const double margin = lp.value - sigma;
  if (margin <= kHemisphereMargin) return std::nullopt;
  Vec v = lp.x.head(d).array() - 1.0;
  return sphere_project(v);
}

std::vector<UnitVector> sample_cap(const UnitVector& axis, double angular_radius,
                                   int count, std::uint64_t seed) {
  require(count >= 0, "sample_cap: negative count");
  if (angular_radius < 0.0) throw Error("sample_cap: negative angular radius");
  const double r = std::min(angular_radius, kPi);
  const int d = axis.dim();
  Rng rng(seed);
  const Rotation frame = Rotation::from_pole(axis);

  std::vector<UnitVector> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    Vec local(d);
    if (r == 0.0) {
      local = Vec::Zero(d);
      local[0] = 1.0;
    } else if (d == 2) {
      const double phi = rng.uniform(-r, r);
      local[0] = std::cos(phi);
      local[1] = std::sin(phi);
    } else {
      // Polar angle density on a cap is proportional to sin^{d-2};
      // rejection-sample against the flat envelope over [0, r].
      const double peak = std::sin(std::min(r, kPi / 2.0));
      double theta = 0.0;
      for (;;) {
        theta = rng.uniform(0.0, r);
        const double accept =
            std::pow(std::sin(theta) / peak, static_cast<double>(d - 2));
        if (rng.uniform01() <= accept) break;
      }
      Vec w(d - 1);
      double wn = 0.0;
      do {
        for (int k = 0; k < d - 1; ++k) w[k] = rng.normal();
        wn = w.norm();
      } while (wn < 1e-12);
      local[0] = std::cos(theta);
      local.tail(d - 1) = (std::sin(theta) / wn) * w;
    }
    Vec world = frame.apply(local);
    world /= world.norm();
    out.emplace_back(std::move(world));
  }
  return out;
}

}  // namespace spheresync
