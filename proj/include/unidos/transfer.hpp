#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "unidos/laurent.hpp"
#include "unidos/mat2.hpp"
#include "unidos/model.hpp"

namespace unidos {

/// Spectral parameter z = e^{i lambda}, lambda possibly complex.
class SpectralParameter {
 public:
  explicit SpectralParameter(cplx z);
  static SpectralParameter on_circle(double lambda) { return SpectralParameter(unit(lambda)); }
  static SpectralParameter from_lambda(cplx lambda) { return SpectralParameter(std::exp(cplx(0.0, 1.0) * lambda)); }
  static SpectralParameter polar(double radius, double lambda) { return SpectralParameter(std::polar(radius, lambda)); }

  cplx z() const { return z_; }
  double radius() const { return std::abs(z_); }
  double arg() const { return std::arg(z_); }
  bool on_unit_circle(double tol = 1e-14) const { return std::abs(std::abs(z_) - 1.0) <= tol; }
  /// 1 / conj(z).
  SpectralParameter reflected() const { return SpectralParameter(1.0 / std::conj(z_)); }

 private:
  cplx z_;
};

/// T(k) with eta_even = eta_{2k}, eta_odd = eta_{2k-1}; maps (c_{2k-2}, c_{2k-1})
/// to (c_{2k}, c_{2k+1}).
Mat2 transfer_matrix(double eta_even, double eta_odd, SpectralParameter z, const Coefficients& params);

/// The same matrix as z A + B + C / z with Laurent entries in z.
LaurentMat2<cplx> transfer_laurent(double eta_even, double eta_odd, const Coefficients& params);

enum class MatrixNorm { operator2, frobenius };

double matrix_norm(const Mat2& m, MatrixNorm norm);

/// Product T(k)...T(1) stored as exp(log_scale) * current.
class Cocycle {
 public:
  static constexpr double kUpper = 0x1.0p20;
  static constexpr double kLower = 0x1.0p-20;

  const Mat2& current() const { return current_; }
  double log_scale() const { return log_scale_; }
  std::int64_t steps() const { return steps_; }

  void extend(const Mat2& t);
  /// log of the chosen norm of the full product.
  double log_norm(MatrixNorm norm = MatrixNorm::operator2) const;

 private:
  Mat2 current_ = Mat2::identity();
  double log_scale_ = 0.0;
  std::int64_t steps_ = 0;
};

Cocycle cocycle_extend(Cocycle c, const Mat2& t);

struct LyapunovBudget {
  std::int64_t n_steps = 100000;
  int n_realizations = 32;
  std::uint64_t seed = 1;
  MatrixNorm norm = MatrixNorm::operator2;
  unsigned threads = 0;
};

struct LyapunovEstimate {
  double gamma = 0.0;
  double stderr_ = 0.0;
  std::vector<double> per_realization;
};

/// gamma per transfer-matrix step (two lattice sites).
LyapunovEstimate lyapunov_estimate(SpectralParameter z, const PhaseModel& model, const Coefficients& params,
                                   const LyapunovBudget& budget);

/// Growth rate of one fixed realization's cocycle over n_steps.
double lyapunov_single(SpectralParameter z, const PhaseSource& source, const Coefficients& params,
                       std::int64_t n_steps, MatrixNorm norm = MatrixNorm::operator2);

/// Eigenvalues of the free transfer matrix at z.
std::pair<cplx, cplx> free_transfer_eigenvalues(SpectralParameter z, const Coefficients& params);

/// Exact free-case exponent.
double lyapunov_free(SpectralParameter z, const Coefficients& params);

}  // namespace unidos
