#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rci/error.hpp"
#include "rci/json_io.hpp"
#include "rci/linalg.hpp"
#include "rci/random.hpp"

namespace rci {

/// Z(c, H) = {c + H b : ||b||_inf <= 1}. Immutable after construction.
class Zonotope {
 public:
  Zonotope() = default;

  Zonotope(Vector center, Matrix generators)
      : center_(std::move(center)), generators_(std::move(generators)) {
    if (generators_.rows() != center_.size()) {
      if (generators_.size() == 0 && generators_.rows() == 0) {
        generators_.resize(center_.size(), 0);
      } else {
        throw DimensionError("zonotope: generator rows (" + std::to_string(generators_.rows()) +
                             ") != center length (" + std::to_string(center_.size()) + ")");
      }
    }
    if (!center_.allFinite() || !generators_.allFinite()) {
      throw Error("zonotope: entries must be finite");
    }
  }

  /// Z(0, H).
  explicit Zonotope(const Matrix& generators)
      : Zonotope(Vector::Zero(generators.rows()), generators) {}

  /// Axis-aligned box Z(0, diag(radii)).
  static Zonotope box(const Vector& radii) { return Zonotope(Matrix(radii.asDiagonal())); }

  int dim() const { return static_cast<int>(center_.size()); }
  int num_generators() const { return static_cast<int>(generators_.cols()); }
  const Vector& center() const { return center_; }
  const Matrix& generators() const { return generators_; }
  bool is_centered() const { return center_.isZero(0.0); }

  /// Half-widths of the bounding box around the center.
  Vector radii() const { return row_abs_sums(generators_); }

 private:
  Vector center_;
  Matrix generators_;
};

/// Z(c1 + c2, [H1, H2]).
inline Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("minkowski_sum: dimensions " + std::to_string(a.dim()) + " and " +
                         std::to_string(b.dim()));
  }
  return Zonotope(a.center() + b.center(), hcat(a.generators(), b.generators()));
}

/// Z(A c, A H).
inline Zonotope linear_map(const Matrix& a, const Zonotope& z) {
  if (a.cols() != z.dim()) {
    throw DimensionError("linear_map: matrix has " + std::to_string(a.cols()) +
                         " columns, zonotope dimension " + std::to_string(z.dim()));
  }
  return Zonotope(a * z.center(), a * z.generators());
}

/// Boxing order reduction: the tightest axis-aligned box around z, as an
/// n-generator zonotope with the same center.
inline Zonotope reduce_box(const Zonotope& z) {
  return Zonotope(z.center(), Matrix(z.radii().asDiagonal()));
}

/// Counter-clockwise vertices of a planar zonotope. Zero generators are
/// dropped and parallel generators merged (tolerance 1e-12), so a segment
/// yields 2 vertices and a point yields 1.
inline std::vector<Eigen::Vector2d> vertices_2d(const Zonotope& z) {
  if (z.dim() != 2) {
    throw DimensionError("vertices_2d: dimension " + std::to_string(z.dim()) + " != 2");
  }
  constexpr double kTol = 1e-12;
  std::vector<Eigen::Vector2d> gens;
  for (int j = 0; j < z.num_generators(); ++j) {
    Eigen::Vector2d g = z.generators().col(j);
    if (g.norm() <= kTol) continue;
    if (g.y() < 0.0 || (g.y() == 0.0 && g.x() < 0.0)) g = -g;
    gens.push_back(g);
  }
  std::sort(gens.begin(), gens.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return std::atan2(a.y(), a.x()) < std::atan2(b.y(), b.x());
  });
  std::vector<Eigen::Vector2d> merged;
  for (const auto& g : gens) {
    if (!merged.empty()) {
      const auto& h = merged.back();
      const double cross = h.x() * g.y() - h.y() * g.x();
      if (std::abs(cross) <= kTol * h.norm() * g.norm()) {
        merged.back() += g;
        continue;
      }
    }
    merged.push_back(g);
  }
  // Directions 0 and pi are the same line after the sign flip.
  if (merged.size() > 1) {
    const auto& f = merged.front();
    const auto& l = merged.back();
    const double cross = f.x() * l.y() - f.y() * l.x();
    if (std::abs(cross) <= kTol * f.norm() * l.norm()) {
      merged.front() += (f.dot(l) >= 0 ? l : Eigen::Vector2d(-l));
      merged.pop_back();
    }
  }

  const Eigen::Vector2d c = z.center();
  if (merged.empty()) return {c};
  Eigen::Vector2d v = c;
  for (const auto& g : merged) v -= g;
  std::vector<Eigen::Vector2d> out;
  out.reserve(2 * merged.size());
  for (const auto& g : merged) {
    out.push_back(v);
    v += 2.0 * g;
  }
  for (const auto& g : merged) {
    out.push_back(v);
    v -= 2.0 * g;
  }
  return out;
}

/// Shoelace area of a simple polygon.
inline double polygon_area(const std::vector<Eigen::Vector2d>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(a);
}

/// Latent coordinate uniform on the unit box.
inline Vector sample_latent(int k, Rng& rng) {
  Vector b(k);
  for (int i = 0; i < k; ++i) b(i) = rng.symmetric();
  return b;
}

/// Random vertex of the unit box.
inline Vector sample_corner(int k, Rng& rng) {
  Vector b(k);
  for (int i = 0; i < k; ++i) b(i) = rng.sign();
  return b;
}

/// c + H b with b uniform on the unit box (not volume-uniform).
inline Vector sample(const Zonotope& z, Rng& rng) {
  if (z.num_generators() == 0) return z.center();
  return z.center() + z.generators() * sample_latent(z.num_generators(), rng);
}

inline Json to_json(const Zonotope& z) {
  Json j;
  j["center"] = json_io::from_vector(z.center());
  j["generators"] = json_io::from_matrix(z.generators());
  return j;
}

inline Zonotope zonotope_from_json(const Json& j, const std::string& path) {
  const Vector c = json_io::to_vector(json_io::require(j, "center", path), path + ".center");
  Matrix g = json_io::to_matrix(json_io::require(j, "generators", path), path + ".generators");
  if (g.rows() == 0 && c.size() > 0) {
    throw ParseError(path + ".generators", "expected " + std::to_string(c.size()) + " rows");
  }
  if (g.rows() != c.size()) {
    throw ParseError(path + ".generators", "has " + std::to_string(g.rows()) +
                                               " rows but center has length " +
                                               std::to_string(c.size()));
  }
  return Zonotope(c, std::move(g));
}

}  // namespace rci
