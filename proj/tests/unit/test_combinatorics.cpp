#include <gtest/gtest.h>

#include <cmath>

#include "unidos/combinatorics.hpp"

using namespace unidos;

namespace {

// C(n, k) / 2^m as an exact rational, built by Pascal's rule.
Rational binom_over(int n, int k, int m) {
  if (k < 0 || k > n) return Rational(0);
  std::vector<boost::multiprecision::cpp_int> row{1};
  for (int i = 0; i < n; ++i) {
    std::vector<boost::multiprecision::cpp_int> next(row.size() + 1, 0);
    for (std::size_t j = 0; j < row.size(); ++j) {
      next[j] += row[j];
      next[j + 1] += row[j];
    }
    row = next;
  }
  return Rational(row[static_cast<std::size_t>(k)]) / Rational(boost::multiprecision::cpp_int(1) << m);
}

}  // namespace

TEST(Paths, HandCountedValues) {
  auto bal = Coefficients::balanced();
  EXPECT_NEAR(path_sum_bruteforce(1, 0, bal), 0.5, 1e-15);
  EXPECT_NEAR(path_sum_bruteforce(2, 0, bal), 0.75, 1e-15);
  auto p = Coefficients(0.6, 0.8);
  const double r2 = 0.36, t2 = 0.64;
  EXPECT_NEAR(path_sum_bruteforce(2, 0, p), r2 * r2 + 2 * r2 * t2, 1e-15);
  EXPECT_NEAR(path_sum_bruteforce(1, 0, p), r2, 1e-15);
  EXPECT_THROW(path_sum_bruteforce(13, 0, p), UsageError);
}

TEST(Paths, StepRules) {
  auto even = PathRules::steps(4), odd = PathRules::steps(-3);
  std::sort(even.begin(), even.end());
  std::sort(odd.begin(), odd.end());
  EXPECT_EQ(even, (std::array<int, 4>{-2, -1, 0, 1}));
  EXPECT_EQ(odd, (std::array<int, 4>{-1, 0, 1, 2}));
}

TEST(GenPoly, FirstStep) {
  auto p = Coefficients(0.6, 0.8);
  auto [pp, pm] = gen_poly(1, p);
  EXPECT_NEAR(pp[0], 0.36, 1e-15);
  EXPECT_NEAR(pp[-2], 0.64, 1e-15);
  EXPECT_EQ(pp[2], 0.0);
  EXPECT_NEAR(pm[1], 0.48, 1e-15);
  EXPECT_NEAR(pm[-1], 0.48, 1e-15);
}

TEST(GenPoly, MatchesBruteForce) {
  for (double r : {0.25, 0.6, 0.77, 0.93, std::sqrt(0.5)}) {
    auto p = Coefficients::from_r(r);
    for (int n = 1; n <= 10; ++n) {
      auto [pp, pm] = gen_poly(n, p);
      auto table = path_sum_table_bruteforce(n, p);
      for (std::int64_t j = -2 * n - 2; j <= 2 * n + 2; ++j) {
        double g = (j % 2 == 0) ? pp[j] : pm[j];
        double b = table.count(j) ? table.at(j) : 0.0;
        EXPECT_NEAR(g, b, 1e-12 * std::max(1.0, b)) << r << " " << n << " " << j;
      }
    }
  }
}

TEST(GenPoly, BalancedBinomialExpansion) {
  for (int n = 1; n <= 12; ++n) {
    auto [qp, qm] = gen_poly(n, balanced_weights());
    Rational total = 0;
    for (std::int64_t j = -2 * n; j <= 2 * n; ++j) {
      Rational g = (j % 2 == 0) ? qp[j] : qm[j];
      int idx = (j % 2 == 0) ? int(j / 2 + n) : int((j - 1) / 2 + n);
      if (j % 2 != 0 && j < 0) idx = int((j - 1) / 2 + n);
      EXPECT_EQ(g, binom_over(2 * n - 1, idx, n)) << n << " " << j;
      EXPECT_EQ(g, s_exact_balanced(n, j).value);
      total += g;
    }
    EXPECT_EQ(total, Rational(boost::multiprecision::cpp_int(1) << n));
  }
  EXPECT_EQ(s_exact_balanced(2, 0).value, Rational(3, 4));
  EXPECT_EQ(s_exact_balanced(2, 1).value, Rational(3, 4));
  EXPECT_FALSE(s_exact_balanced(2, 9).in_range);
  EXPECT_EQ(s_exact_balanced(2, 9).value, Rational(0));
}

TEST(Center, RoutesAgree) {
  EXPECT_NEAR(s_center(3, Coefficients::balanced()), 1.25, 1e-14);
  EXPECT_NEAR(s_center(1, Coefficients(0.6, 0.8)), 0.36, 1e-15);
  for (double r : {0.3, 0.6, std::sqrt(0.5)}) {
    auto p = Coefficients::from_r(r);
    for (int n : {5, 40, 150}) {
      double a = s_center(n, p, CenterRoute::coefficients), b = s_center(n, p, CenterRoute::quadrature);
      EXPECT_NEAR(a / b, 1.0, 1e-9) << r << " " << n;
    }
  }
}

TEST(Center, BalancedAsymptoticIsHalfTheQuotedConstant) {
  // C(2n-1, n) / 2^n ~ 2^n / (2 sqrt(pi n)).
  for (int n : {200, 400}) {
    double ratio = s_center(n, Coefficients::balanced()) * std::sqrt(kPi * n) / std::pow(2.0, n);
    EXPECT_NEAR(ratio, 0.5, 2e-3);
  }
}

TEST(Center, GenericNormalizedRatioSettles) {
  auto p = Coefficients(0.6, 0.8);
  double a = s_center_normalized(300, p) * std::sqrt(300.0), b = s_center_normalized(600, p) * std::sqrt(600.0);
  EXPECT_LT(std::abs(b / a - 1.0), 0.02);
}

TEST(GenEigs, MaximumAndCriticalAngle) {
  auto p = Coefficients(0.6, 0.8);  // tau > 1
  double best = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    auto e = gen_eigs(unit(-kPi + kTwoPi * i / 2000), p);
    best = std::max(best, std::abs(e.plus));
  }
  EXPECT_NEAR(best, std::pow(0.6 + 0.8, 2), 1e-9);
  auto th = critical_angle(p);
  ASSERT_TRUE(th.has_value());
  EXPECT_NEAR(gen_eigs(unit(*th), p).discriminant, 0.0, 1e-10);
  auto q = Coefficients(0.8, 0.6);  // tau < 1
  EXPECT_FALSE(critical_angle(q).has_value());
  for (double th2 : {0.0, 0.5, 1.2, 2.0, -2.9}) EXPECT_TRUE(gen_eigs(unit(th2), q).real);
}

TEST(GenEigs, EigenvaluesOfTheStepMatrix) {
  auto p = Coefficients(0.6, 0.8);
  for (double th : {0.3, 1.4, 2.7}) {
    cplx x = unit(th), xi = 1.0 / x;
    cplx a = 0.36 + 0.64 * xi * xi, b = 0.48 * (x + xi), d = 0.36 + 0.64 * x * x;
    cplx tr = a + d, det = a * d - b * b, s = std::sqrt(tr * tr - 4.0 * det);
    auto e = gen_eigs(x, p);
    double m1 = std::min(std::abs(e.plus - (tr + s) / 2.0), std::abs(e.plus - (tr - s) / 2.0));
    double m2 = std::min(std::abs(e.minus - (tr + s) / 2.0), std::abs(e.minus - (tr - s) / 2.0));
    EXPECT_LT(m1, 1e-12);
    EXPECT_LT(m2, 1e-12);
  }
}

TEST(Analyticity, MarginAndThresholds) {
  auto bal = Coefficients::balanced();
  auto v = analyticity_margin(1.0, 1.0, bal);
  EXPECT_NEAR(v.margin, 1.0 - std::log(2.0), 1e-14);
  EXPECT_TRUE(v.analytic);
  EXPECT_TRUE(analyticity_margin(1.0, std::log(2.0) + 1e-3, bal).all_r);
  EXPECT_FALSE(analyticity_margin(1.0, std::log(2.0) - 1e-3, bal).all_r);
  auto h = analyticity_margin(1.0, 0.5, bal);
  ASSERT_TRUE(h.r_minus && h.r_plus);
  // At the thresholds 1 + 2rt = e^B / A.
  for (double r : {*h.r_minus, *h.r_plus})
    EXPECT_NEAR(1.0 + 2.0 * r * std::sqrt(1.0 - r * r), std::exp(0.5), 1e-12);
  EXPECT_NEAR(analyticity_margin(2.0, 1.5, Coefficients::from_r(1e-8)).margin, 1.5 - std::log(2.0), 1e-7);
  EXPECT_THROW(analyticity_margin(0.9, 1.0, bal), DomainError);
  EXPECT_THROW(analyticity_margin(1.0, 0.0, bal), DomainError);
}
