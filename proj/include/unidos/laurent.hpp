#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "unidos/errors.hpp"

namespace unidos {

/// Finite Laurent series sum_k c_k x^k, k in [low, low + size).
/// Coefficient arithmetic is exact in T; zero ends are trimmed.
template <class T>
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(std::int64_t low, std::vector<T> coeffs) : low_(low), c_(std::move(coeffs)) { trim(); }
  static LaurentPoly constant(T v) { return LaurentPoly(0, {v}); }
  static LaurentPoly monomial(std::int64_t k, T v) { return LaurentPoly(k, {v}); }

  bool is_zero() const { return c_.empty(); }
  std::int64_t low() const { return low_; }
  /// Highest exponent; meaningless for the zero series.
  std::int64_t high() const { return low_ + static_cast<std::int64_t>(c_.size()) - 1; }
  std::size_t size() const { return c_.size(); }
  const std::vector<T>& coefficients() const { return c_; }

  T operator[](std::int64_t k) const {
    if (c_.empty() || k < low_ || k > high()) return T(0);
    return c_[static_cast<std::size_t>(k - low_)];
  }
  T leading() const { return c_.empty() ? T(0) : c_.back(); }
  T trailing() const { return c_.empty() ? T(0) : c_.front(); }

  template <class X>
  X evaluate(X x) const {
    if (c_.empty()) return X(0);
    X acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + X(*it);
    X scale(1);
    std::int64_t e = low_;
    X base = e < 0 ? X(1) / x : x;
    for (std::int64_t n = e < 0 ? -e : e; n > 0; --n) scale *= base;
    return acc * scale;
  }

  LaurentPoly derivative() const {
    std::vector<T> d(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) d[i] = c_[i] * T(static_cast<double>(low_ + static_cast<std::int64_t>(i)));
    return LaurentPoly(low_ - 1, std::move(d));
  }

  LaurentPoly shifted(std::int64_t k) const {
    LaurentPoly out = *this;
    out.low_ += k;
    return out;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) { return *this = add(*this, o, T(1)); }
  LaurentPoly& operator-=(const LaurentPoly& o) { return *this = add(*this, o, T(-1)); }
  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return add(a, b, T(1)); }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return add(a, b, T(-1)); }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> out(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == T(0)) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return LaurentPoly(a.low_ + b.low_, std::move(out));
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const T& s) {
    std::vector<T> out = a.c_;
    for (auto& v : out) v *= s;
    return LaurentPoly(a.low_, std::move(out));
  }
  friend LaurentPoly operator*(const T& s, const LaurentPoly& a) { return a * s; }

  bool operator==(const LaurentPoly& o) const { return low_ == o.low_ && c_ == o.c_; }

 private:
  static LaurentPoly add(const LaurentPoly& a, const LaurentPoly& b, T sign) {
    if (a.is_zero()) return b * sign;
    if (b.is_zero()) return a;
    std::int64_t lo = std::min(a.low_, b.low_);
    std::int64_t hi = std::max(a.high(), b.high());
    std::vector<T> out(static_cast<std::size_t>(hi - lo + 1), T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) out[a.low_ - lo + i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) out[b.low_ - lo + i] += sign * b.c_[i];
    return LaurentPoly(lo, std::move(out));
  }

  void trim() {
    std::size_t first = 0;
    while (first < c_.size() && c_[first] == T(0)) ++first;
    std::size_t last = c_.size();
    while (last > first && c_[last - 1] == T(0)) --last;
    if (first == last) {
      c_.clear();
      low_ = 0;
      return;
    }
    c_ = std::vector<T>(c_.begin() + first, c_.begin() + last);
    low_ += static_cast<std::int64_t>(first);
  }

  std::int64_t low_ = 0;
  std::vector<T> c_;
};

/// 2x2 matrix with Laurent entries.
template <class T>
struct LaurentMat2 {
  LaurentPoly<T> a, b, c, d;

  LaurentMat2 operator*(const LaurentMat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
};

template <class T>
struct LaurentVec2 {
  LaurentPoly<T> u, v;
};

template <class T>
LaurentVec2<T> operator*(const LaurentMat2<T>& m, const LaurentVec2<T>& x) {
  return {m.a * x.u + m.b * x.v, m.c * x.u + m.d * x.v};
}

}  // namespace unidos
