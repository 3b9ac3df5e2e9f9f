#include "unidos/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "unidos/combinatorics.hpp"
#include "unidos/rng.hpp"
#include "unidos/spectrum.hpp"

namespace unidos {

namespace {

CheckResult timed(std::string name, std::string claim, const std::function<bool(std::ostringstream&)>& body) {
  CheckResult res{std::move(name), std::move(claim), false, {}, 0.0};
  std::ostringstream detail;
  auto t0 = std::chrono::steady_clock::now();
  try {
    res.pass = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
    res.pass = false;
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.detail = detail.str();
  return res;
}

double uniform_draw(std::uint64_t seed, std::int64_t i) { return kTwoPi * rng::uniform01(seed, 99, i) - kPi; }

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestOptions& opt) {
  std::vector<CheckResult> out;
  const Coefficients p = Coefficients::from_r(0.6);
  const Coefficients bal = Coefficients::balanced();

  out.push_back(timed("det-transfer", "det T(k) = exp(i(eta_2k - eta_2k-1)) for every z", [&](auto& d) {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      double ee = uniform_draw(1, 3 * i), eo = uniform_draw(1, 3 * i + 1);
      auto z = SpectralParameter::polar(0.5 + rng::uniform01(2, 0, i), uniform_draw(3, i));
      Mat2 t = opt.transfer(ee, eo, z, p);
      worst = std::max(worst, std::abs(t.det() - unit(ee - eo)));
    }
    d << "max defect " << worst;
    return worst <= 1e-12;
  }));

  out.push_back(timed("unitarity", "U is unitary on the window interior", [&](auto& d) {
    auto f = sample_phases(DistributionSpec::uniform(), DistributionSpec::uniform(), Window{-2, 66}, 11);
    double defect = build_u(p, f, Window{0, 64}).unitarity_defect();
    d << "defect " << defect;
    return defect <= 1e-12;
  }));

  out.push_back(timed("factorization", "U = V^-1 D S0 V with D = diag(exp(-i eta_k))", [&](auto& d) {
    auto f = sample_phases(DistributionSpec::uniform(), DistributionSpec::uniform(), Window{0, 64}, 12);
    auto fac = factorize(build_u(p, f, Window{0, 64}, Boundary::periodic));
    d << "residual " << fac.residual;
    return fac.residual <= 1e-12;
  }));

  out.push_back(timed("uniform-lyapunov", "uniform phases give gamma = ln(1/t^2)", [&](auto& d) {
    LyapunovBudget b{20000, 8, 5, MatrixNorm::operator2, opt.threads};
    auto est = lyapunov_estimate(SpectralParameter::on_circle(0.7), PhaseModel::uniform(), bal, b);
    double gap = std::abs(est.gamma - std::log(2.0));
    d << "gamma " << est.gamma << " stderr " << est.stderr_;
    return gap <= std::max(0.02, 3.0 * est.stderr_);
  }));

  out.push_back(timed("free-lyapunov", "free exponent is acosh((r^2 - cos l)/t^2) off the band", [&](auto& d) {
    LyapunovBudget b{20000, 1, 1, MatrixNorm::operator2, 1};
    double worst = 0.0;
    for (double lam : {2.0, 2.5, kPi}) {
      auto z = SpectralParameter::on_circle(lam);
      worst = std::max(worst, std::abs(lyapunov_estimate(z, PhaseModel::free(), p, b).gamma - lyapunov_free(z, p)));
    }
    d << "max gap " << worst;
    return worst <= 1e-3;
  }));

  out.push_back(timed("secular-vs-dense", "secular polynomial roots are the block eigenvalues", [&](auto& d) {
    double worst = 0.0;
    for (auto [M, N] : {std::pair<int, int>{0, 20}, {1, 20}, {0, 21}, {1, 21}}) {
      auto f = sample_phases(DistributionSpec::uniform(), DistributionSpec::uniform(), Window{M - 1, N + 3}, 13);
      auto dense = eigenphases(truncate(p, f, M, N)).phases();
      auto sec = secular_roots(f, p, M, N).measure.phases();
      if (dense.size() != sec.size()) return false;
      for (std::size_t i = 0; i < dense.size(); ++i) worst = std::max(worst, circle_distance(dense[i], sec[i]));
    }
    d << "max phase gap " << worst;
    return worst <= 1e-8;
  }));

  out.push_back(timed("paths-bruteforce", "generating polynomial coefficients equal path sums", [&](auto& d) {
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n) {
      auto [pp, pm] = gen_poly(n, p);
      for (const auto& [j, s] : path_sum_table_bruteforce(n, p)) {
        double g = (j % 2 == 0) ? pp[j] : pm[j];
        worst = std::max(worst, std::abs(g - s) / std::max(1.0, std::abs(s)));
      }
    }
    d << "max relative gap " << worst;
    return worst <= 1e-12;
  }));

  out.push_back(timed("paths-balanced-exact", "balanced path sums are binomial(2n-1, .)/2^n exactly", [&](auto& d) {
    int checked = 0;
    for (int n = 1; n <= 10; ++n) {
      auto [pp, pm] = gen_poly(n, balanced_weights());
      for (std::int64_t j = -2 * n - 1; j <= 2 * n + 1; ++j) {
        Rational g = (j % 2 == 0) ? pp[j] : pm[j];
        if (g != s_exact_balanced(n, j).value) {
          d << "mismatch at n=" << n << " j=" << j;
          return false;
        }
        ++checked;
      }
    }
    d << checked << " exact equalities";
    return true;
  }));

  out.push_back(timed("free-ids", "free integrated DOS equals the arccos closed form", [&](auto& d) {
    auto dk = eigenphases(truncate(p, PhaseField::from_eta(-1, std::vector<double>(404, 0.0)), 0, 400));
    double ks = dk.ks_distance([&](double x) { return free_dos(x, p).integrated; });
    d << "KS " << ks;
    return ks <= 0.02;
  }));

  out.push_back(timed("analyticity", "margin B - ln(1 + 2rt) - ln A", [&](auto& d) {
    auto v = analyticity_margin(1.0, 1.0, bal);
    auto w = analyticity_margin(1.0, 0.5, bal);
    d << "margin " << v.margin;
    return std::abs(v.margin - (1.0 - std::log(2.0))) < 1e-12 && v.analytic && !w.all_r && w.r_plus &&
           std::abs(*w.r_plus - 0.938357) < 1e-6 && std::abs(*w.r_minus - 0.345669) < 1e-6;
  }));

  return out;
}

}  // namespace unidos
