#pragma once

#include <algorithm>
#include <cmath>

#include "unidos/torus.hpp"

namespace unidos {

/// 2x2 complex matrix [[a, b], [c, d]].
struct Mat2 {
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static Mat2 identity() { return {}; }
  static Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

  cplx det() const { return a * d - b * c; }
  cplx trace() const { return a + d; }

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }
  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }

  Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }
  Mat2 inverse() const {
    cplx det_inv = 1.0 / det();
    return {d * det_inv, -b * det_inv, -c * det_inv, a * det_inv};
  }

  double frobenius() const {
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
  }
  double max_abs() const {
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  }
  /// Largest singular value, from the closed form for 2x2 matrices.
  double operator_norm() const {
    double f2 = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    double dt = std::abs(det());
    double disc = std::max(0.0, f2 * f2 - 4.0 * dt * dt);
    return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
  }
};

}  // namespace unidos
