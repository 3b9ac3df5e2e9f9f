#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "unidos/laurent.hpp"
#include "unidos/mat2.hpp"
#include "unidos/model.hpp"

namespace unidos {

/// Isolated unitary block on sites [M+1, N] with the boundary prescription
/// applied at both cuts.
struct TruncatedBlock {
  std::int64_t M = 0, N = 0;
  BandUnitary matrix;
  PhaseField phases;  // eta after zeroing at the cuts
  bool m_even() const { return M % 2 == 0; }
  bool n_even() const { return N % 2 == 0; }
};

/// Needs eta on [M - 1, N + 3).
TruncatedBlock truncate(const Coefficients& params, const PhaseField& phases, std::int64_t M, std::int64_t N);

/// Empirical probability measure on (-pi, pi].
class SpectralMeasure {
 public:
  SpectralMeasure() = default;
  /// Uniform weights; throws NumericError if some ||z| - 1| > modulus_tol.
  static SpectralMeasure from_eigenvalues(std::span<const cplx> eigenvalues, double modulus_tol = 1e-8);
  static SpectralMeasure from_phases(std::vector<double> phases, std::vector<double> weights = {});
  /// Each part contributes mass 1 / parts.size().
  static SpectralMeasure pooled(std::span<const SpectralMeasure> parts);

  std::size_t size() const { return phases_.size(); }
  bool empty() const { return phases_.empty(); }
  const std::vector<double>& phases() const { return phases_; }
  const std::vector<double>& weights() const { return weights_; }
  double total_mass() const;
  double max_modulus_defect() const { return modulus_defect_; }

  /// Mass of (-pi, lam].
  double integrated(double lam) const;
  /// sum_k w_k e^{i s lambda_k}.
  cplx moment(int s) const;
  /// Mass per bin; bin b is (-pi + b h, -pi + (b + 1) h].
  std::vector<double> histogram(int bins = 256) const;
  double ks_distance(const std::function<double(double)>& cdf) const;
  double ks_distance(const SpectralMeasure& other) const;

 private:
  std::vector<double> phases_, weights_;
  double modulus_defect_ = 0.0;
};

SpectralMeasure eigenphases(const TruncatedBlock& block);

/// Boundary vectors b_1..b_4 and their adjoints a_j(z) = b_j(1/z) with conjugated
/// coefficient vectors.
LaurentVec2<cplx> boundary_vector(int j, const Coefficients& params);
LaurentVec2<cplx> adjoint_boundary_vector(int j, const Coefficients& params);

struct SecularPolynomial {
  int j = 1, k = 1;
  std::int64_t m0 = 0, n0 = 0;
  LaurentPoly<cplx> poly;
  std::int64_t expected_degree = 0;
  /// log|leading coefficient| / ((N - M) / 2).
  double growth_rate = 0.0;
};

/// z^{n0-m0+2-k-j} a_j(1/z)^T Phi(z) b_k(z), with Phi = T(n0-1)...T(m0+2) on the
/// truncated phases. Its roots are the eigenvalues of the block.
SecularPolynomial secular_polynomial(const PhaseField& phases, const Coefficients& params, std::int64_t M,
                                     std::int64_t N);

struct SecularResult {
  SpectralMeasure measure;
  std::vector<cplx> roots;
  SecularPolynomial polynomial;
  double max_off_circle = 0.0;
  std::vector<std::size_t> near_minus_one;  // indices into roots
};

SecularResult secular_roots(const PhaseField& phases, const Coefficients& params, std::int64_t M, std::int64_t N);

struct MomentEstimate {
  std::vector<cplx> m;  // m[0..s_max]
  std::vector<double> stderr_;
  cplx at(int s) const { return s >= 0 ? m.at(static_cast<std::size_t>(s)) : std::conj(m.at(static_cast<std::size_t>(-s))); }
};

/// Monte Carlo estimate of E[<phi_0|U^s phi_0> + <phi_1|U^s phi_1>] / 2.
MomentEstimate dos_moments(const PhaseModel& model, const Coefficients& params, int s_max, int n_realizations,
                           std::uint64_t seed, unsigned threads = 0);

double integrated_dos(const SpectralMeasure& measure, double lam);

struct FreeDos {
  double density = 0.0;     // w.r.t. d lambda
  double integrated = 0.0;  // N_0(lambda)
};
FreeDos free_dos(double lam, const Coefficients& params);

struct BandFunctions {
  cplx lambda_plus, lambda_minus;
  double alpha = 0.0;
  Mat2 symbol;
};
BandFunctions band_functions(double x, const Coefficients& params);

/// int f dk_0 via the band functions; tanh-sinh quadrature split at `breaks` (in x).
double free_expectation(const std::function<double(cplx)>& f, const Coefficients& params,
                        std::vector<double> breaks = {});
/// Free moments int z^s dk_0 (real by symmetry).
double free_moment(int s, const Coefficients& params);

ArcSet free_spectrum_arc(const Coefficients& params);
ArcSet predicted_support(const DistributionSpec& mu, const Coefficients& params);
/// Uses the eta marginal of the model; UsageError when it is not available.
ArcSet predicted_support(const PhaseModel& model, const Coefficients& params);

struct SupportReport {
  std::size_t count = 0, outliers = 0;
  double outlier_fraction = 0.0;
  double max_signed_distance = 0.0;
  /// Share of the arc length lying within tol of some eigenphase.
  double coverage = 0.0;
  /// Share of histogram bins inside the arcs that carry mass.
  double bin_coverage = 0.0;
};
SupportReport support_check(const SpectralMeasure& measure, const ArcSet& arcs, double tol, int bins = 256);

struct PoolBudget {
  std::int64_t size = 500;
  std::int64_t M = 0;
  int n_realizations = 100;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// Realizations on [M+1, M+size], pooled with equal weights.
SpectralMeasure pooled_eigenphases(const PhaseModel& model, const Coefficients& params, const PoolBudget& budget);

}  // namespace unidos
