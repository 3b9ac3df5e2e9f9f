#pragma once

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "unidos/laurent.hpp"
#include "unidos/model.hpp"

namespace unidos {

using Rational = boost::multiprecision::cpp_rational;

/// Admissible steps: {0, +1, -1, -2} from even sites, {0, +1, -1, +2} from odd ones.
struct PathRules {
  static std::array<int, 4> steps(std::int64_t site);
};

/// Moduli of the free entries: stay r^2, hop rt, jump t^2.
template <class T>
struct PathWeights {
  T stay, hop, jump;
};

PathWeights<double> path_weights(const Coefficients& params);
PathWeights<Rational> balanced_weights();

/// Weighted sum over n-step admissible paths from `start` to j (n <= 12).
double path_sum_bruteforce(int n, std::int64_t j, const Coefficients& params, std::int64_t start = 0);
/// All endpoints at once.
std::map<std::int64_t, double> path_sum_table_bruteforce(int n, const Coefficients& params, std::int64_t start = 0);

/// (P_n^+, P_n^-): coefficient of x^j is S_{n-1}(j) for even / odd j.
template <class T>
std::pair<LaurentPoly<T>, LaurentPoly<T>> gen_poly(int n, const PathWeights<T>& w) {
  if (n < 0) throw UsageError("gen_poly needs n >= 0");
  using L = LaurentPoly<T>;
  const L even_stay(-2, {w.jump, T(0), w.stay});  // r^2 + t^2 x^-2
  const L odd_stay(0, {w.stay, T(0), w.jump});    // r^2 + t^2 x^2
  const L hop(-1, {w.hop, T(0), w.hop});          // rt (x + 1/x)
  L plus = L::constant(T(1)), minus;
  for (int s = 0; s < n; ++s) {
    L np = plus * even_stay + minus * hop;
    L nm = plus * hop + minus * odd_stay;
    plus = std::move(np);
    minus = std::move(nm);
  }
  return {plus, minus};
}

std::pair<LaurentPoly<double>, LaurentPoly<double>> gen_poly(int n, const Coefficients& params);

enum class CenterRoute { coefficients, quadrature, automatic };

/// S_{n-1}(0).
double s_center(int n, const Coefficients& params, CenterRoute route = CenterRoute::automatic);
/// S_{n-1}(0) / (r + t)^{2n}; safe for large n.
double s_center_normalized(int n, const Coefficients& params, CenterRoute route = CenterRoute::automatic);

struct BalancedValue {
  Rational value;
  bool in_range = false;
};

/// Exact S_{n-1}(j) at r = t.
BalancedValue s_exact_balanced(int n, std::int64_t j);

struct GenEigs {
  cplx plus, minus;  // r^2 lambda_+-(x)
  double discriminant = 0.0;
  bool real = true;
};

GenEigs gen_eigs(cplx x, const Coefficients& params);
/// Angle where the discriminant vanishes for tau > 1; nullopt otherwise.
std::optional<double> critical_angle(const Coefficients& params);

struct AnalyticityVerdict {
  double margin = 0.0;
  bool analytic = false;
  bool all_r = false;
  std::optional<double> r_minus, r_plus;
};

AnalyticityVerdict analyticity_margin(double A, double B, const Coefficients& params);

}  // namespace unidos
