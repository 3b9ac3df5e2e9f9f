#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "unidos/model.hpp"
#include "unidos/rng.hpp"

using namespace unidos;

namespace {

const cplx I(0.0, 1.0);

// Entries of U read off the matrix-element display, one column at a time.
std::map<std::pair<std::int64_t, std::int64_t>, cplx> oracle_u(const Coefficients& p, const PhaseField& f,
                                                               std::int64_t lo, std::int64_t hi) {
  const double r = p.r(), t = p.t();
  std::map<std::pair<std::int64_t, std::int64_t>, cplx> u;
  for (std::int64_t k = -200; k <= 200; ++k) {
    const std::int64_t e = 2 * k, o = 2 * k + 1;
    auto put = [&](std::int64_t row, std::int64_t col, cplx v, std::int64_t site) {
      if (row >= lo && row < hi && col >= lo && col < hi) u[{row, col}] = v * std::exp(-I * f.eta(site));
    };
    put(e - 1, e, I * r * t, e);
    put(e, e, r * r, e);
    put(e + 1, e, I * r * t, o);
    put(e + 2, e, -t * t, o);
    put(e - 1, o, -t * t, e);
    put(e, o, I * t * r, e);
    put(e + 1, o, r * r, o);
    put(e + 2, o, I * r * t, o);
  }
  return u;
}

PhaseField random_field(Window w, std::uint64_t seed) {
  return PhaseField::materialize(PhaseSource(PhaseModel::uniform(), seed), w);
}

}  // namespace

TEST(Coefficients, RejectsInconsistentPair) {
  EXPECT_THROW(Coefficients(0.6, 0.6), ConfigError);
  EXPECT_THROW(Coefficients::from_r(1.0), ConfigError);
  EXPECT_THROW(Coefficients::from_r(0.0), ConfigError);
  EXPECT_NO_THROW(Coefficients(0.6, 0.8));
}

TEST(Coefficients, BandEdge) {
  auto p = Coefficients(0.6, 0.8);
  EXPECT_NEAR(p.band_edge(), std::acos(0.36 - 0.64), 1e-15);
  EXPECT_NEAR(Coefficients::balanced().band_edge(), kPi / 2, 1e-15);
}

TEST(Distribution, CharacteristicFunctions) {
  EXPECT_EQ(DistributionSpec::uniform().characteristic(0), cplx(1.0));
  EXPECT_NEAR(std::abs(DistributionSpec::uniform().characteristic(3)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(DistributionSpec::point_mass(0.4).characteristic(2) - std::exp(I * 0.8)), 0.0, 1e-15);
  // Arc: compare with a midpoint rule on the uniform density.
  auto arc = DistributionSpec::arc(0.3, 0.7);
  for (int n : {1, 2, 5, -3}) {
    cplx acc = 0.0;
    const int m = 20000;
    for (int i = 0; i < m; ++i) acc += std::exp(I * (n * (0.3 - 0.7 + 1.4 * (i + 0.5) / m)));
    EXPECT_NEAR(std::abs(arc.characteristic(n) - acc / double(m)), 0.0, 1e-8) << n;
  }
}

TEST(Distribution, FourierDensityValidation) {
  EXPECT_THROW(DistributionSpec::fourier_density(0.5, 1.0, {0.1}), ConfigError);
  EXPECT_THROW(DistributionSpec::fourier_density(1.0, 1.0, {0.9}), ConfigError);  // above A e^{-B}
  EXPECT_THROW(DistributionSpec::fourier_density(3.0, 0.01, {2.9, 2.8, 2.7}), ConfigError);  // negative density
  auto d = DistributionSpec::fourier_density(1.0, 1.0, {std::exp(-1.0), std::exp(-2.0)});
  double mass = 0.0;
  const int m = 4096;
  for (int i = 0; i < m; ++i) mass += d.density(-kPi + kTwoPi * (i + 0.5) / m) * kTwoPi / m;
  EXPECT_NEAR(mass, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(d.characteristic(1) - std::exp(-1.0)), 0.0, 1e-15);
}

TEST(Distribution, SamplesStayInSupportAndRepeat) {
  auto arc = DistributionSpec::arc(1.0, 0.2);
  for (std::int64_t k = 0; k < 2000; ++k) {
    double x = arc.sample(5, rng::kEta, k);
    EXPECT_LE(circle_distance(x, 1.0), 0.2 + 1e-12);
    EXPECT_EQ(x, arc.sample(5, rng::kEta, k));
  }
}

TEST(Distribution, FourierSamplerMatchesCoefficients) {
  auto d = DistributionSpec::fourier_density(1.0, 0.5, {0.4, 0.2});
  cplx m1 = 0.0, m2 = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    double x = d.sample(11, rng::kEta, k);
    m1 += std::exp(I * x);
    m2 += std::exp(2.0 * I * x);
  }
  EXPECT_NEAR(std::abs(m1 / double(n) - 0.4), 0.0, 5.0 / std::sqrt(double(n)));
  EXPECT_NEAR(std::abs(m2 / double(n) - 0.2), 0.0, 5.0 / std::sqrt(double(n)));
}

TEST(Phases, CoupledEtaFormula) {
  PhaseSource src(PhaseModel::coupled(DistributionSpec::arc(0.0, 1.0), DistributionSpec::uniform()), 3);
  for (std::int64_t k = -5; k < 5; ++k) {
    double want = src.theta(k) + src.theta(k - 1) + src.alpha(k) - src.alpha(k - 1);
    EXPECT_NEAR(circle_distance(src.eta(k), want), 0.0, 1e-12);
  }
  auto f = PhaseField::materialize(src, Window{-5, 5});
  EXPECT_LT(f.consistency_defect(), 1e-12);
  EXPECT_EQ(f.eta(-5), src.eta(-5));
  EXPECT_THROW(f.eta(5), UsageError);
}

TEST(Phases, ShiftAndOverride) {
  auto f = PhaseField::from_eta(0, {0.1, 0.2, 0.3, 0.4});
  auto g = f.shifted(2);
  EXPECT_EQ(g.eta(0), 0.3);
  EXPECT_EQ(g.eta(-2), 0.1);
  auto h = f.with_eta(1, 1.5);
  EXPECT_EQ(h.eta(1), 1.5);
  EXPECT_EQ(f.eta(1), 0.2);
}

TEST(Phases, UniformMarginalAndFree) {
  auto m = PhaseModel::uniform().eta_marginal();
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->kind(), DistributionSpec::Kind::uniform);
  EXPECT_TRUE(PhaseModel::free().is_deterministic());
  auto f = PhaseField::materialize(PhaseSource(PhaseModel::free(), 1), Window{0, 10});
  for (std::int64_t k = 0; k < 10; ++k) EXPECT_EQ(f.eta(k), 0.0);
}

TEST(Phases, CharacteristicEstimateUniform) {
  std::vector<PhaseField> fields;
  for (std::uint64_t s = 0; s < 2000; ++s) fields.push_back(random_field(Window{-2, 3}, s));
  std::vector<int> orders{1, 2, 3};
  for (const auto& est : phase_char_fn(fields, orders)) EXPECT_LT(std::abs(est.value), 5.0 * est.stderr_ + 1e-3);
  std::vector<PhaseField> few(fields.begin(), fields.begin() + 10);
  EXPECT_THROW(phase_char_fn(few, orders), UsageError);
}

TEST(BuildU, MatchesMatrixElementDisplay) {
  auto p = Coefficients(0.6, 0.8);
  auto f = random_field(Window{-13, 15}, 9);
  auto u = build_u(p, f, Window{-12, 14});
  auto want = oracle_u(p, f, -12, 14);
  for (std::int64_t i = -12; i < 14; ++i)
    for (std::int64_t j = -12; j < 14; ++j) {
      auto it = want.find({i, j});
      cplx w = it == want.end() ? cplx(0.0) : it->second;
      EXPECT_NEAR(std::abs(u.at_sites(i, j) - w), 0.0, 1e-15) << i << "," << j;
    }
}

TEST(BuildU, FreeColumnsMatchSpecExample) {
  auto p = Coefficients(0.6, 0.8);
  auto u = build_free(p, Window{-4, 8});
  EXPECT_NEAR(std::abs(u.at_sites(1, 2) - I * 0.48), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.at_sites(2, 2) - 0.36), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.at_sites(4, 2) + 0.64), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.at_sites(1, 3) + 0.64), 0.0, 1e-15);
  EXPECT_EQ(u.at_sites(0, 3), cplx(0.0));
}

TEST(BuildU, NearlyTransparentLimit) {
  auto p = Coefficients::from_r(1.0 - 1e-9);
  auto u = build_free(p, Window{0, 12});
  EXPECT_LE(std::abs(u.at_sites(4, 2)), 2e-9);
  EXPECT_LE(std::abs(u.at_sites(3, 5)), 2e-9);
  EXPECT_NEAR(std::abs(u.at_sites(2, 2)), 1.0, 1e-8);
}

TEST(BuildU, UnitaryOpenAndPeriodic) {
  for (double r : {0.2, std::sqrt(0.5), 0.9}) {
    auto p = Coefficients::from_r(r);
    auto f = random_field(Window{-31, 33}, 21);
    EXPECT_LT(build_u(p, f, Window{-30, 32}).unitarity_defect(), 1e-12);
    EXPECT_LT(build_u(p, f, Window{-30, 32}, Boundary::periodic).unitarity_defect(), 1e-12);
  }
}

TEST(BuildU, PeriodicDenseIsUnitary) {
  auto p = Coefficients(0.6, 0.8);
  auto f = random_field(Window{0, 12}, 4);
  auto u = build_u(p, f, Window{0, 12}, Boundary::periodic);
  auto d = u.dense();
  const std::size_t n = u.dimension();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += std::conj(d[k + i * n]) * d[k + j * n];
      worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
    }
  EXPECT_LT(worst, 1e-13);
}

TEST(BuildU, ApplyMatchesDense) {
  auto p = Coefficients(0.6, 0.8);
  auto f = random_field(Window{-1, 21}, 8);
  auto u = build_u(p, f, Window{0, 20});
  auto d = u.dense();
  std::vector<cplx> v(20);
  for (std::size_t i = 0; i < 20; ++i) v[i] = cplx(std::sin(1.0 + i), std::cos(3.0 * i));
  auto a = u.apply(v), b = u.apply_adjoint(v);
  for (std::size_t i = 0; i < 20; ++i) {
    cplx x = 0.0, y = 0.0;
    for (std::size_t j = 0; j < 20; ++j) {
      x += d[i + j * 20] * v[j];
      y += std::conj(d[j + i * 20]) * v[j];
    }
    EXPECT_NEAR(std::abs(a[i] - x), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(b[i] - y), 0.0, 1e-14);
  }
}

TEST(BuildU, RejectsBadWindows) {
  auto p = Coefficients::balanced();
  auto f = random_field(Window{0, 10}, 1);
  EXPECT_THROW(build_u(p, f, Window{0, 10}), UsageError);
  EXPECT_THROW(build_u(p, f, Window{1, 9}, Boundary::periodic), UsageError);
  EXPECT_THROW(build_u(p, f, Window{0, 4}, Boundary::periodic), UsageError);
}

TEST(Factorization, ReproducesU) {
  for (double r : {0.3, 0.8}) {
    auto p = Coefficients::from_r(r);
    auto f = random_field(Window{-20, 20}, 31);
    auto fac = factorize(build_u(p, f, Window{-20, 20}, Boundary::periodic));
    EXPECT_LT(fac.residual, 1e-12);
    for (std::size_t k = 0; k < fac.d.size(); ++k)
      EXPECT_NEAR(std::abs(fac.d[k] - std::exp(-I * f.eta(-20 + std::int64_t(k)))), 0.0, 1e-15);
  }
}

TEST(Factorization, FreeBlocksAndMultiply) {
  auto p = Coefficients(0.6, 0.8);
  auto u0 = build_free(p, Window{0, 12}, Boundary::periodic);
  auto fac = factorize(u0);
  // S0 is the free operator up to the similarity V.
  auto prod = multiply(fac.s0, fac.v);
  auto d = prod.dense(), s = fac.s0.dense(), v = fac.v.dense();
  const std::size_t n = 12;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += s[i + k * n] * v[k + j * n];
      EXPECT_NEAR(std::abs(acc - d[i + j * n]), 0.0, 1e-14);
    }
}
