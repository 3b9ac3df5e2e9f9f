#include "unidos/torus.hpp"

#include <algorithm>

namespace unidos {

namespace {

// Normalize to lo in (-pi, pi], then merge on the unrolled line [lo, lo+2pi).
std::vector<Arc> merge(std::vector<Arc> arcs) {
  std::vector<Arc> out;
  for (auto& a : arcs) {
    if (a.hi < a.lo) std::swap(a.lo, a.hi);
    if (a.length() >= kTwoPi) return {Arc{-kPi, kPi}};
    double shift = wrap_phase(a.lo) - a.lo;
    a.lo += shift;
    a.hi += shift;
  }
  std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) { return x.lo < y.lo; });
  for (const auto& a : arcs) {
    if (!out.empty() && a.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, a.hi);
    } else {
      out.push_back(a);
    }
  }
  // Arcs running past pi may swallow the first ones.
  while (out.size() > 1 && out.back().hi - kTwoPi >= out.front().lo) {
    out.back().hi = std::max(out.back().hi, out.front().hi + kTwoPi);
    out.erase(out.begin());
  }
  if (!out.empty() && out.size() == 1 && out.front().length() >= kTwoPi) return {Arc{-kPi, kPi}};
  for (const auto& a : out) {
    if (a.length() >= kTwoPi) return {Arc{-kPi, kPi}};
  }
  return out;
}

}  // namespace

ArcSet::ArcSet(std::vector<Arc> arcs) : arcs_(merge(std::move(arcs))) {}

ArcSet ArcSet::full() { return ArcSet({Arc{-kPi, kPi}}); }

bool ArcSet::is_full() const { return arcs_.size() == 1 && arcs_.front().length() >= kTwoPi; }

double ArcSet::measure() const {
  double m = 0.0;
  for (const auto& a : arcs_) m += a.length();
  return std::min(m, kTwoPi);
}

double ArcSet::distance(double x) const {
  if (is_full()) return 0.0;
  double best = kPi;
  for (const auto& a : arcs_) {
    double mid = 0.5 * (a.lo + a.hi);
    double off = circle_distance(x, mid) - 0.5 * a.length();
    best = std::min(best, std::max(off, 0.0));
  }
  return best;
}

double ArcSet::signed_distance(double x) const {
  if (arcs_.empty()) return kPi;
  if (is_full()) return -kPi;
  double outside = distance(x);
  if (outside > 0.0) return outside;
  double depth = 0.0;
  for (const auto& a : arcs_) {
    double mid = 0.5 * (a.lo + a.hi);
    depth = std::max(depth, 0.5 * a.length() - circle_distance(x, mid));
  }
  return -depth;
}

ArcSet ArcSet::rotated_by(const ArcSet& other) const {
  std::vector<Arc> out;
  for (const auto& a : arcs_)
    for (const auto& b : other.arcs_) out.push_back(Arc{a.lo + b.lo, a.hi + b.hi});
  return ArcSet(std::move(out));
}

ArcSet ArcSet::dilated(double tol) const {
  std::vector<Arc> out;
  for (const auto& a : arcs_) out.push_back(Arc{a.lo - tol, a.hi + tol});
  return ArcSet(std::move(out));
}

}  // namespace unidos
