#include <gtest/gtest.h>

#include <cmath>

#include "unidos/selftest.hpp"
#include "unidos/transfer.hpp"

using namespace unidos;

namespace {

const cplx I(0.0, 1.0);

PhaseField random_field(Window w, std::uint64_t seed) {
  return PhaseField::materialize(PhaseSource(PhaseModel::uniform(), seed), w);
}

// Sign-flipped T12: breaks the determinant identity and the eigenvector relation.
Mat2 broken_transfer(double e, double o, SpectralParameter z, const Coefficients& p) {
  Mat2 t = transfer_matrix(e, o, z, p);
  t.b = -t.b + 0.1;
  return t;
}

}  // namespace

TEST(SpectralParameter, Validation) {
  EXPECT_THROW(SpectralParameter(cplx(0.0)), DomainError);
  EXPECT_THROW(SpectralParameter(cplx(NAN, 0.0)), DomainError);
  auto z = SpectralParameter::polar(2.0, 0.3);
  EXPECT_NEAR(std::abs(z.reflected().z() - std::polar(0.5, 0.3)), 0.0, 1e-15);
  EXPECT_TRUE(SpectralParameter::on_circle(1.0).on_unit_circle());
}

// Propagate a generalized eigenvector with T and check (U c)_s = z c_s row by row.
TEST(Transfer, PropagatesGeneralizedEigenvectors) {
  for (double r : {0.35, 0.6, 0.9}) {
    auto p = Coefficients::from_r(r);
    auto f = random_field(Window{-3, 40}, 17);
    auto u = build_u(p, f, Window{-2, 38});
    for (cplx z : {cplx(0.3, 0.9), std::polar(1.0, 2.0), std::polar(1.4, -0.6)}) {
      auto zp = SpectralParameter(z);
      std::vector<cplx> c(40, 0.0);  // c[s] for site s in [0, 40)
      c[0] = cplx(0.7, -0.2);
      c[1] = cplx(-0.3, 0.5);
      for (std::int64_t k = 1; 2 * k + 1 < 36; ++k) {
        Mat2 t = transfer_matrix(f.eta(2 * k), f.eta(2 * k - 1), zp, p);
        c[2 * k] = t.a * c[2 * k - 2] + t.b * c[2 * k - 1];
        c[2 * k + 1] = t.c * c[2 * k - 2] + t.d * c[2 * k - 1];
      }
      double scale = 0.0, worst = 0.0;
      for (auto v : c) scale = std::max(scale, std::abs(v));
      for (std::int64_t s = 2; s < 32; ++s) {
        cplx acc = 0.0;
        for (std::int64_t col = s - 2; col <= s + 2; ++col) acc += u.at_sites(s, col) * c[col];
        worst = std::max(worst, std::abs(acc - z * c[s]));
      }
      EXPECT_LT(worst / scale, 1e-12) << "r=" << r << " z=" << z;
    }
  }
}

TEST(Transfer, DeterminantIdentity) {
  auto p = Coefficients(0.6, 0.8);
  for (int i = 0; i < 50; ++i) {
    double e = 0.37 * i - 3.0, o = 1.3 - 0.21 * i;
    auto z = SpectralParameter::polar(0.2 + 0.05 * i, 0.9 * i);
    EXPECT_NEAR(std::abs(transfer_matrix(e, o, z, p).det() - std::exp(I * (e - o))), 0.0, 1e-12);
  }
}

TEST(Transfer, LaurentFormAgrees) {
  auto p = Coefficients(0.6, 0.8);
  auto L = transfer_laurent(0.4, -1.1, p);
  EXPECT_GE(L.a.low(), -1);
  EXPECT_LE(L.d.high(), 1);
  for (cplx z : {cplx(0.5, 0.1), cplx(-2.0, 1.0), std::polar(1.0, 0.3)}) {
    Mat2 t = transfer_matrix(0.4, -1.1, SpectralParameter(z), p);
    EXPECT_NEAR(std::abs(L.a.evaluate(z) - t.a), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(L.b.evaluate(z) - t.b), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(L.c.evaluate(z) - t.c), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(L.d.evaluate(z) - t.d), 0.0, 1e-13);
  }
}

TEST(Cocycle, RenormalizationIsExact) {
  auto p = Coefficients(0.3, std::sqrt(0.91));
  auto z = SpectralParameter::polar(1.2, 2.8);
  Cocycle c;
  Mat2 direct = Mat2::identity();
  for (int k = 0; k < 200; ++k) {
    Mat2 t = transfer_matrix(0.1 * k, -0.2 * k, z, p);
    c.extend(t);
    direct = t * direct;
  }
  EXPECT_GT(c.log_scale(), 0.0);
  EXPECT_NEAR(c.log_norm(), std::log(matrix_norm(direct, MatrixNorm::operator2)), 1e-9);
  EXPECT_NEAR(c.log_norm(MatrixNorm::frobenius), std::log(matrix_norm(direct, MatrixNorm::frobenius)), 1e-9);
}

TEST(Cocycle, OperatorNormOracle) {
  Mat2 m{cplx(1.0, 2.0), cplx(0.5, -1.0), cplx(-0.3, 0.0), cplx(2.0, 1.0)};
  // Largest singular value by power iteration on M*M.
  cplx x = 1.0, y = 0.3;
  for (int i = 0; i < 200; ++i) {
    cplx u = m.a * x + m.b * y, v = m.c * x + m.d * y;
    x = std::conj(m.a) * u + std::conj(m.c) * v;
    y = std::conj(m.b) * u + std::conj(m.d) * v;
    double n = std::hypot(std::abs(x), std::abs(y));
    x /= n;
    y /= n;
  }
  cplx u = m.a * x + m.b * y, v = m.c * x + m.d * y;
  EXPECT_NEAR(matrix_norm(m, MatrixNorm::operator2), std::hypot(std::abs(u), std::abs(v)), 1e-12);
}

TEST(Lyapunov, FreeClosedForm) {
  auto p = Coefficients(0.6, 0.8);
  const double r2 = 0.36, t2 = 0.64;
  for (double lam : {2.0, 2.5, 3.1, -2.2}) {
    double x = (r2 - std::cos(lam)) / t2;
    EXPECT_NEAR(lyapunov_free(SpectralParameter::on_circle(lam), p), std::acosh(std::abs(x)), 1e-12);
  }
  EXPECT_EQ(lyapunov_free(SpectralParameter::on_circle(0.3), p), 0.0);
  // Off the circle: growth of the larger eigenvalue of the free transfer matrix.
  for (cplx z : {cplx(1.5, 0.4), cplx(0.2, -0.5)}) {
    Mat2 t = transfer_matrix(0.0, 0.0, SpectralParameter(z), p);
    cplx tr = t.trace(), det = t.det();
    cplx s = std::sqrt(tr * tr - 4.0 * det);
    double big = std::max(std::abs((tr + s) / 2.0), std::abs((tr - s) / 2.0));
    EXPECT_NEAR(lyapunov_free(SpectralParameter(z), p), std::log(big), 1e-12);
  }
}

TEST(Lyapunov, FreeCocycleMatchesClosedForm) {
  auto p = Coefficients(0.6, 0.8);
  LyapunovBudget b{20000, 1, 1, MatrixNorm::operator2, 1};
  for (double lam : {2.2, 3.0}) {
    auto z = SpectralParameter::on_circle(lam);
    EXPECT_NEAR(lyapunov_estimate(z, PhaseModel::free(), p, b).gamma, lyapunov_free(z, p), 1e-3);
  }
}

TEST(Lyapunov, UniformPhasesGiveLogInverseT2) {
  auto p = Coefficients(0.6, 0.8);
  LyapunovBudget b{20000, 8, 3, MatrixNorm::operator2, 1};
  auto est = lyapunov_estimate(SpectralParameter::on_circle(1.1), PhaseModel::uniform(), p, b);
  EXPECT_NEAR(est.gamma, std::log(1.0 / 0.64), std::max(0.02, 4.0 * est.stderr_));
}

TEST(Lyapunov, NormChoiceDoesNotMatter) {
  auto p = Coefficients::balanced();
  auto z = SpectralParameter::on_circle(0.4);
  PhaseSource src(PhaseModel::uniform(), 5);
  double a = lyapunov_single(z, src, p, 20000, MatrixNorm::operator2);
  double b = lyapunov_single(z, src, p, 20000, MatrixNorm::frobenius);
  EXPECT_NEAR(a, b, std::log(2.0) / 20000 + 1e-12);
}

TEST(Lyapunov, DeterministicAcrossThreadCounts) {
  auto p = Coefficients::balanced();
  auto z = SpectralParameter::polar(0.9, 1.0);
  LyapunovBudget b1{2000, 6, 77, MatrixNorm::operator2, 1}, b3 = b1;
  b3.threads = 3;
  auto a = lyapunov_estimate(z, PhaseModel::uniform(), p, b1), c = lyapunov_estimate(z, PhaseModel::uniform(), p, b3);
  EXPECT_EQ(a.per_realization, c.per_realization);
  EXPECT_EQ(a.gamma, c.gamma);
}

TEST(Lyapunov, BudgetValidation) {
  LyapunovBudget b{10, 2, 1, MatrixNorm::operator2, 1};
  EXPECT_THROW(lyapunov_estimate(SpectralParameter::on_circle(0.0), PhaseModel::uniform(), Coefficients::balanced(), b),
               UsageError);
}

TEST(Selftest, DetectsBrokenTransferMatrix) {
  SelftestOptions opt;
  opt.transfer = &broken_transfer;
  opt.threads = 1;
  bool caught = false;
  for (const auto& r : run_selftest(opt))
    if (r.name == "det-transfer") caught = !r.pass;
  EXPECT_TRUE(caught);
}
