#include "unidos/transfer.hpp"

#include <cmath>

#include "unidos/parallel.hpp"
#include "unidos/rng.hpp"

namespace unidos {

SpectralParameter::SpectralParameter(cplx z) : z_(z) {
  if (z == 0.0 || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("spectral parameter must be finite and nonzero");
}

Mat2 transfer_matrix(double eta_even, double eta_odd, SpectralParameter zp, const Coefficients& p) {
  const cplx z = zp.z();
  const cplx I(0.0, 1.0);
  const double r = p.r(), t = p.t();
  const double rt = r / t, r2t2 = (r * r) / (t * t);
  const cplx eo = unit(-eta_odd) / z;          // e^{-i eta_odd(lambda)}
  const cplx ee = unit(eta_even) * z;          // e^{i eta_even(lambda)}
  const cplx diff = unit(eta_even - eta_odd);  // lambda-independent
  Mat2 m;
  m.a = -eo;
  m.b = I * rt * (eo - 1.0);
  m.c = I * rt * (diff - eo);
  m.d = -ee / (t * t) + r2t2 * (diff + 1.0 - eo);
  return m;
}

LaurentMat2<cplx> transfer_laurent(double eta_even, double eta_odd, const Coefficients& p) {
  const cplx I(0.0, 1.0);
  const double r = p.r(), t = p.t();
  const double rt = r / t, r2t2 = (r * r) / (t * t);
  const cplx eo = unit(-eta_odd);
  const cplx ee = unit(eta_even);
  const cplx diff = unit(eta_even - eta_odd);
  using L = LaurentPoly<cplx>;
  auto poly = [](cplx cm1, cplx c0, cplx c1) { return L(-1, {cm1, c0, c1}); };
  return {poly(-eo, 0.0, 0.0), poly(I * rt * eo, -I * rt, 0.0), poly(-I * rt * eo, I * rt * diff, 0.0),
          poly(-r2t2 * eo, r2t2 * (diff + 1.0), -ee / (t * t))};
}

double matrix_norm(const Mat2& m, MatrixNorm norm) {
  return norm == MatrixNorm::operator2 ? m.operator_norm() : m.frobenius();
}

void Cocycle::extend(const Mat2& t) {
  current_ = t * current_;
  ++steps_;
  double size = current_.max_abs();
  if (size > kUpper || size < kLower) {
    double nrm = current_.operator_norm();
    if (nrm == 0.0 || !std::isfinite(nrm)) throw NumericError("cocycle product degenerated");
    current_ = current_ * cplx(1.0 / nrm);
    log_scale_ += std::log(nrm);
  }
}

double Cocycle::log_norm(MatrixNorm norm) const { return log_scale_ + std::log(matrix_norm(current_, norm)); }

Cocycle cocycle_extend(Cocycle c, const Mat2& t) {
  c.extend(t);
  return c;
}

double lyapunov_single(SpectralParameter z, const PhaseSource& source, const Coefficients& params,
                       std::int64_t n_steps, MatrixNorm norm) {
  Cocycle c;
  const bool coupled = source.model().kind() == PhaseModel::Kind::coupled;
  // Sequential sweep reuses theta_{k-1}, alpha_{k-1}.
  double th_prev = coupled ? source.theta(0) : 0.0;
  double al_prev = coupled ? source.alpha(0) : 0.0;
  auto next_eta = [&](std::int64_t k) {
    if (!coupled) return source.eta(k);
    double th = source.theta(k), al = source.alpha(k);
    double e = wrap_phase(th + th_prev + al - al_prev);
    th_prev = th;
    al_prev = al;
    return e;
  };
  for (std::int64_t k = 1; k <= n_steps; ++k) {
    double eta_odd = next_eta(2 * k - 1);
    double eta_even = next_eta(2 * k);
    c.extend(transfer_matrix(eta_even, eta_odd, z, params));
  }
  return c.log_norm(norm) / static_cast<double>(n_steps);
}

LyapunovEstimate lyapunov_estimate(SpectralParameter z, const PhaseModel& model, const Coefficients& params,
                                   const LyapunovBudget& budget) {
  if (budget.n_steps < 1000) throw UsageError("lyapunov_estimate needs n_steps >= 1000");
  if (budget.n_realizations < 1) throw UsageError("lyapunov_estimate needs at least one realization");
  LyapunovEstimate est;
  est.per_realization = ordered_map(static_cast<std::size_t>(budget.n_realizations), budget.threads, [&](std::size_t i) {
    PhaseSource source(model, rng::derive(budget.seed, i));
    return lyapunov_single(z, source, params, budget.n_steps, budget.norm);
  });
  const double n = static_cast<double>(est.per_realization.size());
  double mean = 0.0;
  for (double g : est.per_realization) mean += g;
  mean /= n;
  double var = 0.0;
  for (double g : est.per_realization) var += (g - mean) * (g - mean);
  est.gamma = mean;
  est.stderr_ = n > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  return est;
}

std::pair<cplx, cplx> free_transfer_eigenvalues(SpectralParameter z, const Coefficients& params) {
  Mat2 t = transfer_matrix(0.0, 0.0, z, params);
  cplx half = 0.5 * t.trace();
  cplx root = std::sqrt(half * half - t.det());
  cplx a = half + root, b = half - root;
  // Recompute the smaller one from the product to avoid cancellation.
  if (std::abs(a) < std::abs(b)) std::swap(a, b);
  if (a != 0.0) b = t.det() / a;
  return {a, b};
}

double lyapunov_free(SpectralParameter z, const Coefficients& params) {
  if (z.on_unit_circle()) {
    const double r = params.r(), t = params.t();
    double x = (r * r - std::cos(z.arg())) / (t * t);
    if (std::abs(x) <= 1.0) return 0.0;
    return std::acosh(std::abs(x));
  }
  auto [a, b] = free_transfer_eigenvalues(z, params);
  return std::log(std::max(std::abs(a), std::abs(b)));
}

}  // namespace unidos
