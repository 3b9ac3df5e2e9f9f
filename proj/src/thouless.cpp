#include "unidos/thouless.hpp"

#include <algorithm>
#include <cmath>

#include "unidos/parallel.hpp"

namespace unidos {

double thouless_rhs(SpectralParameter z, const SpectralMeasure& measure, const Coefficients& params,
                    double exclusion_radius) {
  if (measure.empty()) throw UsageError("thouless_rhs: empty measure");
  const double ln_inv_t2 = -2.0 * std::log(params.t());
  const auto& ph = measure.phases();
  const auto& w = measure.weights();
  if (z.on_unit_circle()) {
    const double lam = z.arg();
    double acc = 0.0, kept = 0.0;
    for (std::size_t i = 0; i < ph.size(); ++i) {
      if (circle_distance(ph[i], lam) < exclusion_radius) continue;
      double s = std::sin(0.5 * (lam - ph[i]));
      acc += w[i] * std::log(s * s);
      kept += w[i];
    }
    if (kept == 0.0) throw NumericError("thouless_rhs: every atom was excluded");
    return acc * (measure.total_mass() / kept) + std::log(4.0) + ln_inv_t2;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < ph.size(); ++i) acc += w[i] * std::log(std::abs(z.z() - unit(ph[i])));
  return 2.0 * acc + ln_inv_t2 - std::log(z.radius());
}

double thouless_rhs_free(SpectralParameter z, const Coefficients& params) {
  const double ln_inv_t2 = -2.0 * std::log(params.t());
  const cplx zz = z.z();
  std::vector<double> breaks;
  if (z.on_unit_circle()) {
    // ln|z - e^{+-i alpha(x)}| is singular where alpha(x) = |arg z|.
    const double r = params.r(), t = params.t();
    double u = (r * r - std::cos(z.arg())) / (t * t);
    if (u > -1.0 && u < 1.0) {
      double x = 0.5 * std::acos(u);
      breaks = {-x, x};
    }
  }
  double integral = free_expectation([&](cplx e) { return std::log(std::abs(zz - e)); }, params, breaks);
  return 2.0 * integral + ln_inv_t2 - std::log(z.radius());
}

double poisson_transform(const SpectralMeasure& measure, double lam_prime, double eps) {
  if (!(eps > 0.0)) throw DomainError("poisson_transform needs eps > 0");
  const double q = std::exp(-eps), q2 = q * q;
  double acc = 0.0;
  const auto& ph = measure.phases();
  const auto& w = measure.weights();
  for (std::size_t i = 0; i < ph.size(); ++i) acc += w[i] * (1.0 - q2) / (1.0 + q2 - 2.0 * q * std::cos(ph[i] - lam_prime));
  return acc;
}

AcDensityEstimate ac_density(const SpectralMeasure& measure, double lam_prime, std::span<const double> eps_schedule) {
  if (eps_schedule.size() < 3) throw UsageError("ac_density needs at least three schedule points");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0.0)) throw UsageError("ac_density schedule must be positive");
    if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1])) throw UsageError("ac_density schedule must decrease");
  }
  AcDensityEstimate est;
  for (double e : eps_schedule) {
    est.eps.push_back(e);
    est.values.push_back(poisson_transform(measure, lam_prime, e));
  }
  const std::size_t n = est.eps.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = n - 3; i < n; ++i) {
    mx += est.eps[i] / 3.0;
    my += est.values[i] / 3.0;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = n - 3; i < n; ++i) {
    sxx += (est.eps[i] - mx) * (est.eps[i] - mx);
    sxy += (est.eps[i] - mx) * (est.values[i] - my);
  }
  est.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  est.density = my - est.slope * mx;
  for (std::size_t i = n - 3; i < n; ++i)
    est.fit_residual = std::max(est.fit_residual, std::abs(est.values[i] - (est.density + est.slope * est.eps[i])));
  return est;
}

ThoulessReport thouless_scan(std::span<const cplx> grid, const PhaseModel& model, const Coefficients& params,
                             const ThoulessBudget& budget) {
  ThoulessReport rep;
  for (const auto& z : grid) rep.z.push_back(SpectralParameter(z).z());
  SpectralMeasure dk = pooled_eigenphases(model, params, budget.pool);
  auto gammas = ordered_map(grid.size(), 1u, [&](std::size_t i) {
    return lyapunov_estimate(SpectralParameter(grid[i]), model, params, budget.lyapunov);
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rep.gamma_cocycle.push_back(gammas[i].gamma);
    rep.stderr_.push_back(gammas[i].stderr_);
    double rhs = thouless_rhs(SpectralParameter(grid[i]), dk, params);
    rep.gamma_thouless.push_back(rhs);
    rep.gap.push_back(gammas[i].gamma - rhs);
    rep.max_abs_gap = std::max(rep.max_abs_gap, std::abs(rep.gap.back()));
  }
  return rep;
}

}  // namespace unidos
