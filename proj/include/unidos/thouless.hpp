#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "unidos/spectrum.hpp"
#include "unidos/transfer.hpp"

namespace unidos {

/// 2 int ln|z - e^{i l}| dk(l) + ln(1/t^2) - ln|z| as a sum over atoms. On the
/// circle the equivalent sin^2 form is used; atoms closer than exclusion_radius
/// to arg z are dropped and the rest renormalized.
double thouless_rhs(SpectralParameter z, const SpectralMeasure& measure, const Coefficients& params,
                    double exclusion_radius = 1e-9);

/// The same right-hand side against the free density of states, by quadrature.
double thouless_rhs_free(SpectralParameter z, const Coefficients& params);

/// Poisson integral of dk at e^{i lam_prime} e^{-eps}.
double poisson_transform(const SpectralMeasure& measure, double lam_prime, double eps);

struct AcDensityEstimate {
  double density = 0.0;  // w.r.t. d lambda / 2 pi
  std::vector<double> eps, values;
  double slope = 0.0;
  double fit_residual = 0.0;
};

/// Poisson transforms along a decreasing schedule, extrapolated to eps = 0 by
/// a linear fit through the last three points.
AcDensityEstimate ac_density(const SpectralMeasure& measure, double lam_prime, std::span<const double> eps_schedule);

struct ThoulessBudget {
  LyapunovBudget lyapunov;
  PoolBudget pool;
};

struct ThoulessReport {
  std::vector<cplx> z;
  std::vector<double> gamma_cocycle, stderr_, gamma_thouless, gap;
  double max_abs_gap = 0.0;
};

ThoulessReport thouless_scan(std::span<const cplx> grid, const PhaseModel& model, const Coefficients& params,
                             const ThoulessBudget& budget);

}  // namespace unidos
