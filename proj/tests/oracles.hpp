#pragma once

// Reference computations used only by the tests. They avoid the library's
// LP solver and vertex walk so that agreement means something.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using P2 = Eigen::Vector2d;

/// All 2^p points c + H s with s in {-1, 1}^p.
inline std::vector<Vec> sign_images(const Vec& c, const Mat& h) {
  const int p = static_cast<int>(h.cols());
  std::vector<Vec> out;
  for (long mask = 0; mask < (1L << p); ++mask) {
    Vec x = c;
    for (int j = 0; j < p; ++j) x += ((mask >> j) & 1 ? 1.0 : -1.0) * h.col(j);
    out.push_back(x);
  }
  return out;
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
inline std::vector<P2> convex_hull(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end(), [](const P2& a, const P2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  auto cross = [](const P2& o, const P2& a, const P2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  if (pts.size() < 3) return pts;
  std::vector<P2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-12) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 1e-12) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

inline double shoelace(const std::vector<P2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const P2& p = poly[i];
    const P2& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(a);
}

/// Point inside a counter-clockwise convex polygon, with slack.
inline bool in_convex(const std::vector<P2>& poly, const P2& x, double tol) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const P2& a = poly[i];
    const P2& b = poly[(i + 1) % poly.size()];
    const P2 e = b - a;
    const double len = e.norm();
    if (len == 0.0) continue;
    const double side = (e.x() * (x.y() - a.y()) - e.y() * (x.x() - a.x())) / len;
    if (side < -tol) return false;
  }
  return true;
}

/// Planar zonotope containment by vertex enumeration.
inline bool contains_2d(const Mat& inner, const Mat& outer, double tol = 1e-9) {
  std::vector<P2> outer_pts;
  for (const auto& v : sign_images(Vec::Zero(2), outer)) outer_pts.push_back(v);
  const auto hull = convex_hull(outer_pts);
  for (const auto& v : sign_images(Vec::Zero(2), inner)) {
    if (!in_convex(hull, v, tol)) return false;
  }
  return true;
}

/// Box (axis-aligned) zonotope containment: exact for a diagonal outer.
inline bool in_box(const Mat& inner, const Vec& radii, double tol = 1e-12) {
  for (int i = 0; i < inner.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < inner.cols(); ++j) s += std::abs(inner(i, j));
    if (s > radii(i) + tol) return false;
  }
  return true;
}

/// min c'x s.t. A x <= b by enumerating every vertex (n <= 4). Returns
/// +inf when infeasible; callers keep the feasible set bounded.
inline double brute_force_lp(const Vec& c, const Mat& a, const Vec& b, Vec* argmin = nullptr) {
  const int n = static_cast<int>(a.cols());
  const int m = static_cast<int>(a.rows());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(n);
  std::vector<bool> pick(m, false);
  std::fill(pick.begin(), pick.begin() + std::min(n, m), true);
  do {
    int t = 0;
    for (int i = 0; i < m; ++i) {
      if (pick[i]) idx[t++] = i;
    }
    Mat sub(n, n);
    Vec rhs(n);
    for (int r = 0; r < n; ++r) {
      sub.row(r) = a.row(idx[r]);
      rhs(r) = b(idx[r]);
    }
    Eigen::FullPivLU<Mat> lu(sub);
    if (lu.rank() < n) continue;
    const Vec x = lu.solve(rhs);
    if (((a * x - b).array() > 1e-9).any()) continue;
    const double v = c.dot(x);
    if (v < best) {
      best = v;
      if (argmin) *argmin = x;
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace oracle
