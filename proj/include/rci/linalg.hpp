#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "rci/error.hpp"

namespace rci {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Horizontal concatenation [a, b]. Either operand may have zero columns.
inline Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("hcat: row mismatch " + std::to_string(a.rows()) +
                         " vs " + std::to_string(b.rows()));
  }
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

/// Block-diagonal stacking of two matrices.
inline Matrix blkdiag(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

/// Row sums of |H|; the half-widths of the bounding box of Z(0, H).
/// Summed left to right over columns so the result does not depend on vectorization.
inline Vector row_abs_sums(const Matrix& h) {
  Vector r = Vector::Zero(h.rows());
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    for (Eigen::Index i = 0; i < h.rows(); ++i) r(i) += std::abs(h(i, j));
  return r;
}

/// Entrywise 1-norm, sum of |a_ij|.
inline double entrywise_l1(const Matrix& a) { return a.cwiseAbs().sum(); }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Rank test of the controllability matrix [B, AB, ..., A^{n-1}B] through
/// its singular values.
inline bool is_controllable(const Matrix& a, const Matrix& b, double tol = 1e-9) {
  const auto n = a.rows();
  if (n == 0) return true;
  Matrix ctrb(n, n * b.cols());
  Matrix block = b;
  for (Eigen::Index i = 0; i < n; ++i) {
    ctrb.middleCols(i * b.cols(), b.cols()) = block;
    block = a * block;
  }
  Eigen::JacobiSVD<Matrix> svd(ctrb);
  const Vector& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++rank;
  }
  return rank == n;
}

/// Counter-clockwise planar rotation.
inline Matrix rotation2d(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace rci
