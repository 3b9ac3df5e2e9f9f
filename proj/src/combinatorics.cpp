#include "unidos/combinatorics.hpp"

#include <cmath>
#include <vector>

#include "unidos/errors.hpp"

namespace unidos {

std::array<int, 4> PathRules::steps(std::int64_t site) {
  if (site % 2 == 0) return {0, 1, -1, -2};
  return {0, 1, -1, 2};
}

PathWeights<double> path_weights(const Coefficients& p) {
  return {p.r() * p.r(), p.r() * p.t(), p.t() * p.t()};
}

PathWeights<Rational> balanced_weights() {
  Rational half(1, 2);
  return {half, half, half};
}

namespace {

template <class W>
double step_weight(int step, const W& w) {
  switch (step) {
    case 0:
      return w.stay;
    case 1:
    case -1:
      return w.hop;
    default:
      return w.jump;
  }
}

// Neumaier-compensated running sum; up to 4^12 terms land on one endpoint.
struct Sum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
};

void enumerate(int left, std::int64_t site, double weight, const PathWeights<double>& w,
               std::map<std::int64_t, Sum>& out) {
  if (left == 0) {
    out[site].add(weight);
    return;
  }
  for (int s : PathRules::steps(site)) enumerate(left - 1, site + s, weight * step_weight(s, w), w, out);
}

}  // namespace

std::map<std::int64_t, double> path_sum_table_bruteforce(int n, const Coefficients& params, std::int64_t start) {
  if (n < 0 || n > 12) throw UsageError("path_sum_bruteforce is limited to 0 <= n <= 12");
  std::map<std::int64_t, Sum> sums;
  enumerate(n, start, 1.0, path_weights(params), sums);
  std::map<std::int64_t, double> out;
  for (const auto& [j, v] : sums) out[j] = v.s + v.c;
  return out;
}

double path_sum_bruteforce(int n, std::int64_t j, const Coefficients& params, std::int64_t start) {
  auto table = path_sum_table_bruteforce(n, params, start);
  auto it = table.find(j);
  return it == table.end() ? 0.0 : it->second;
}

std::pair<LaurentPoly<double>, LaurentPoly<double>> gen_poly(int n, const Coefficients& params) {
  return gen_poly(n, path_weights(params));
}

namespace {

// Mean of P_n^+ over 8n equispaced points of the circle, weights scaled by s.
double center_by_quadrature(int n, const Coefficients& p, double scale) {
  const auto w = path_weights(p);
  const double stay = w.stay * scale, hop = w.hop * scale, jump = w.jump * scale;
  const int nodes = 8 * std::max(n, 1);
  double acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const cplx x = unit(kTwoPi * k / nodes);
    const cplx xi = std::conj(x);
    const cplx m11 = stay + jump * xi * xi, m12 = hop * (x + xi), m22 = stay + jump * x * x;
    cplx a = 1.0, b = 0.0;
    for (int s = 0; s < n; ++s) {
      cplx na = m11 * a + m12 * b;
      cplx nb = m12 * a + m22 * b;
      a = na;
      b = nb;
    }
    acc += a.real();
  }
  return acc / nodes;
}

}  // namespace

double s_center(int n, const Coefficients& params, CenterRoute route) {
  if (n < 1) throw UsageError("s_center needs n >= 1");
  if (route == CenterRoute::automatic) route = n <= 200 ? CenterRoute::coefficients : CenterRoute::quadrature;
  if (route == CenterRoute::coefficients) return gen_poly(n, params).first[0];
  return center_by_quadrature(n, params, 1.0);
}

double s_center_normalized(int n, const Coefficients& params, CenterRoute route) {
  if (n < 1) throw UsageError("s_center needs n >= 1");
  const double rt2 = (params.r() + params.t()) * (params.r() + params.t());
  if (route == CenterRoute::automatic) route = n <= 200 ? CenterRoute::coefficients : CenterRoute::quadrature;
  if (route == CenterRoute::coefficients) {
    auto w = path_weights(params);
    PathWeights<double> scaled{w.stay / rt2, w.hop / rt2, w.jump / rt2};
    return gen_poly(n, scaled).first[0];
  }
  return center_by_quadrature(n, params, 1.0 / rt2);
}

BalancedValue s_exact_balanced(int n, std::int64_t j) {
  if (n < 1) throw UsageError("s_exact_balanced needs n >= 1");
  const std::int64_t top = 2 * static_cast<std::int64_t>(n) - 1;
  const std::int64_t idx = (j % 2 == 0) ? j / 2 + n : (j - 1) / 2 + n;
  BalancedValue out;
  if (idx < 0 || idx > top) return out;
  using boost::multiprecision::cpp_int;
  cpp_int num = 1, den = 1;
  for (std::int64_t i = 0; i < idx; ++i) {
    num *= (top - i);
    den *= (i + 1);
  }
  out.value = Rational(num, den * (cpp_int(1) << n));
  out.in_range = true;
  return out;
}

GenEigs gen_eigs(cplx x, const Coefficients& params) {
  const double tau = params.tau(), tau2 = tau * tau, r2 = params.r() * params.r();
  const cplx half_trace = 1.0 + 0.5 * tau2 * (x * x + 1.0 / (x * x));
  const double det = (1.0 - tau2) * (1.0 - tau2);
  const cplx disc = half_trace * half_trace - det;
  const cplx root = std::sqrt(disc);
  GenEigs g;
  g.plus = r2 * (half_trace + root);
  g.minus = r2 * (half_trace - root);
  g.discriminant = disc.real();
  g.real = disc.real() >= 0.0;
  return g;
}

std::optional<double> critical_angle(const Coefficients& params) {
  const double tau = params.tau();
  if (tau <= 1.0) return std::nullopt;
  return 0.5 * std::acos((tau * tau - 2.0) / (tau * tau));
}

AnalyticityVerdict analyticity_margin(double A, double B, const Coefficients& params) {
  if (!(A >= 1.0)) throw DomainError("analyticity_margin needs A >= 1");
  if (!(B > 0.0)) throw DomainError("analyticity_margin needs B > 0");
  AnalyticityVerdict v;
  v.margin = B - std::log1p(2.0 * params.r() * params.t()) - std::log(A);
  v.analytic = v.margin > 0.0;
  const double q = std::exp(B) / A - 1.0;
  v.all_r = q > 1.0;
  if (q > 0.0 && q < 1.0) {
    const double root = std::sqrt((1.0 - q) * (1.0 + q));
    v.r_minus = std::sqrt(0.5 * (1.0 - root));
    v.r_plus = std::sqrt(0.5 * (1.0 + root));
  }
  return v;
}

}  // namespace unidos
