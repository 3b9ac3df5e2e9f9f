#include "unidos/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "unidos/errors.hpp"

namespace unidos {

std::vector<cplx> dense_eigenvalues(std::vector<cplx> a, std::size_t n) {
  if (a.size() != n * n) throw UsageError("dense_eigenvalues: size mismatch");
  if (n == 0) return {};
  std::vector<cplx> w(n);
  const auto ln = static_cast<lapack_int>(n);
  lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', ln, reinterpret_cast<lapack_complex_double*>(a.data()),
                                  ln, reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr, 1);
  if (info != 0)
    throw NumericError("zgeev failed (info = " + std::to_string(info) + ") on a " + std::to_string(n) + "x" +
                       std::to_string(n) + " block");
  return w;
}

namespace {

struct View {
  cplx* p;
  std::size_t n;
  cplx& operator()(std::size_t i, std::size_t j) { return p[j * n + i]; }
};

double abs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Diagonal similarity by powers of two so that row and column norms match.
void balance(View h) {
  const double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < h.n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < h.n; ++j) {
        if (j == i) continue;
        c += abs1(h(j, i));
        r += abs1(h(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0, s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        for (std::size_t j = 0; j < h.n; ++j) h(i, j) /= f;
        for (std::size_t j = 0; j < h.n; ++j) h(j, i) *= f;
      }
    }
  }
}

}  // namespace

std::vector<cplx> hessenberg_eigenvalues(std::vector<cplx> data, std::size_t n) {
  if (data.size() != n * n) throw UsageError("hessenberg_eigenvalues: size mismatch");
  std::vector<cplx> eig(n);
  if (n == 0) return eig;
  View h{data.data(), n};
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<cplx> cs(n), sn(n);
  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
  int iter = 0;
  const int max_iter = 60;
  while (hi >= 0) {
    std::ptrdiff_t lo = hi;
    while (lo > 0) {
      auto l = static_cast<std::size_t>(lo);
      double scale = abs1(h(l - 1, l - 1)) + abs1(h(l, l));
      if (scale == 0.0) scale = 1.0;
      if (abs1(h(l, l - 1)) <= eps * scale) {
        h(l, l - 1) = 0.0;
        break;
      }
      --lo;
    }
    auto uh = static_cast<std::size_t>(hi);
    if (lo == hi) {
      eig[uh] = h(uh, uh);
      --hi;
      iter = 0;
      continue;
    }
    if (++iter > max_iter)
      throw NumericError("Hessenberg QR did not converge for eigenvalue " + std::to_string(hi) + " of " +
                         std::to_string(n));
    auto ul = static_cast<std::size_t>(lo);
    cplx mu;
    if (iter % 11 == 0) {
      mu = h(uh, uh) + cplx(0.75, 0.5) * std::abs(h(uh, uh - 1));  // exceptional shift
    } else {
      cplx a = h(uh - 1, uh - 1), b = h(uh - 1, uh), c = h(uh, uh - 1), d = h(uh, uh);
      cplx half = 0.5 * (a - d);
      cplx disc = std::sqrt(half * half + b * c);
      cplx m1 = 0.5 * (a + d) + disc, m2 = 0.5 * (a + d) - disc;
      mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
    }
    for (std::size_t k = ul; k <= uh; ++k) h(k, k) -= mu;
    for (std::size_t k = ul; k < uh; ++k) {
      cplx x = h(k, k), y = h(k + 1, k);
      double rho = std::hypot(std::abs(x), std::abs(y));
      cplx c = rho == 0.0 ? cplx(1.0) : x / rho;
      cplx s = rho == 0.0 ? cplx(0.0) : y / rho;
      cs[k] = c;
      sn[k] = s;
      for (std::size_t j = k; j <= uh; ++j) {
        cplx u = h(k, j), v = h(k + 1, j);
        h(k, j) = std::conj(c) * u + std::conj(s) * v;
        h(k + 1, j) = -s * u + c * v;
      }
    }
    for (std::size_t k = ul; k < uh; ++k) {
      cplx c = cs[k], s = sn[k];
      std::size_t top = std::min(k + 2, uh);
      for (std::size_t i = ul; i <= top; ++i) {
        cplx u = h(i, k), v = h(i, k + 1);
        h(i, k) = u * c + v * s;
        h(i, k + 1) = -u * std::conj(s) + v * std::conj(c);
      }
    }
    for (std::size_t k = ul; k <= uh; ++k) h(k, k) += mu;
  }
  return eig;
}

std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs) {
  std::size_t deg = coeffs.size();
  while (deg > 0 && coeffs[deg - 1] == 0.0) --deg;
  if (deg == 0) throw UsageError("polynomial_roots: zero polynomial");
  const std::size_t d = deg - 1;
  if (coeffs[0] == 0.0) throw UsageError("polynomial_roots: constant coefficient is zero");
  if (d == 0) return {};
  const cplx lead = coeffs[d];
  std::vector<cplx> m(d * d, 0.0);
  View h{m.data(), d};
  for (std::size_t j = 0; j < d; ++j) h(0, j) = -coeffs[d - 1 - j] / lead;
  for (std::size_t i = 1; i < d; ++i) h(i, i - 1) = 1.0;
  balance(h);
  auto roots = hessenberg_eigenvalues(std::move(m), d);
  auto eval = [&](cplx z, cplx& dp) {
    cplx p = 0.0;
    dp = 0.0;
    for (std::size_t k = d + 1; k-- > 0;) {
      dp = dp * z + p;
      p = p * z + coeffs[k];
    }
    return p;
  };
  for (auto& z : roots) {
    for (int it = 0; it < 3; ++it) {
      cplx dp;
      cplx p = eval(z, dp);
      if (dp == 0.0) break;
      cplx step = p / dp;
      if (std::abs(step) > 1e-6 * std::max(1.0, std::abs(z))) break;
      cplx znew = z - step;
      cplx dq;
      if (std::abs(eval(znew, dq)) < std::abs(p))
        z = znew;
      else
        break;
    }
  }
  return roots;
}

}  // namespace unidos
