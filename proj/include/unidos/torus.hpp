#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace unidos {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce to (-pi, pi].
inline double wrap_phase(double x) {
  double y = std::remainder(x, kTwoPi);
  if (y <= -kPi) y += kTwoPi;
  return y;
}

/// Geodesic distance on the circle, in [0, pi].
inline double circle_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

inline cplx unit(double phase) { return std::polar(1.0, phase); }

/// Half-open integer interval [lo, hi) of lattice sites.
struct Window {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  std::int64_t size() const { return hi - lo; }
  bool empty() const { return hi <= lo; }
  bool contains(std::int64_t k) const { return k >= lo && k < hi; }
  bool contains(const Window& w) const { return w.lo >= lo && w.hi <= hi; }
  bool operator==(const Window&) const = default;
};

/// Closed arc {lo <= x <= hi} on the circle; hi - lo in [0, 2pi].
struct Arc {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Finite union of closed arcs, kept merged and with lo in (-pi, pi].
class ArcSet {
 public:
  ArcSet() = default;
  explicit ArcSet(std::vector<Arc> arcs);

  static ArcSet full();
  static ArcSet symmetric(double half_width) { return ArcSet({Arc{-half_width, half_width}}); }

  const std::vector<Arc>& arcs() const { return arcs_; }
  bool is_full() const;
  bool empty() const { return arcs_.empty(); }
  double measure() const;

  /// Distance from phase x to the set (0 inside).
  double distance(double x) const;
  /// Negative depth inside the set, positive distance outside.
  double signed_distance(double x) const;
  bool contains(double x, double tol = 0.0) const { return distance(x) <= tol; }

  /// Minkowski sum on the circle: rotate every arc of this by every arc of other.
  ArcSet rotated_by(const ArcSet& other) const;
  ArcSet dilated(double tol) const;

 private:
  std::vector<Arc> arcs_;
};

}  // namespace unidos
