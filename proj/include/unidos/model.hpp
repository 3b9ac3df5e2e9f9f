#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unidos/errors.hpp"
#include "unidos/torus.hpp"

namespace unidos {

/// Reflexion r and transition t coefficients, r^2 + t^2 = 1.
class Coefficients {
 public:
  Coefficients(double r, double t);
  static Coefficients from_r(double r);
  static Coefficients balanced();

  double r() const { return r_; }
  double t() const { return t_; }
  double tau() const { return t_ / r_; }
  /// Half-width of the free band, arccos(r^2 - t^2).
  double band_edge() const;

 private:
  double r_, t_;
};

/// Law of a torus-valued random variable.
class DistributionSpec {
 public:
  enum class Kind { uniform, point_mass, arc, fourier_density };

  static DistributionSpec uniform();
  static DistributionSpec point_mass(double c);
  static DistributionSpec arc(double center, double half_width);
  /// Density (1/2pi)(1 + 2 Re sum_{n>=1} c_n e^{-in x}); c_n is the n-th Fourier
  /// coefficient, |c_n| <= A e^{-Bn} required.
  static DistributionSpec fourier_density(double A, double B, std::vector<cplx> coefficients);

  Kind kind() const { return kind_; }
  double center() const { return center_; }
  double half_width() const { return half_width_; }
  double A() const { return A_; }
  double B() const { return B_; }
  const std::vector<cplx>& coefficients() const { return coeffs_; }

  /// Draw from a uniform [0,1) counter stream keyed by (seed, tag, site).
  double sample(std::uint64_t seed, std::uint64_t tag, std::int64_t site) const;
  /// E[e^{inX}].
  cplx characteristic(int n) const;
  /// Density w.r.t. dx on (-pi, pi]; throws UsageError for a point mass.
  double density(double x) const;
  ArcSet support() const;
  bool is_degenerate() const { return kind_ == Kind::point_mass; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::uniform;
  double center_ = 0.0, half_width_ = kPi;
  double A_ = 1.0, B_ = 0.0;
  std::vector<cplx> coeffs_;
  double density_max_ = 1.0 / kTwoPi;
};

/// How eta is produced: eta_k = theta_k + theta_{k-1} + alpha_k - alpha_{k-1}
/// from i.i.d. (theta, alpha), or eta i.i.d. directly.
class PhaseModel {
 public:
  enum class Kind { coupled, iid_eta };

  static PhaseModel coupled(DistributionSpec theta, DistributionSpec alpha);
  static PhaseModel iid(DistributionSpec eta);
  static PhaseModel uniform() { return coupled(DistributionSpec::uniform(), DistributionSpec::uniform()); }
  static PhaseModel free() {
    return coupled(DistributionSpec::point_mass(0.0), DistributionSpec::point_mass(0.0));
  }

  Kind kind() const { return kind_; }
  const DistributionSpec& theta() const { return theta_; }
  const DistributionSpec& alpha() const { return alpha_; }
  const DistributionSpec& eta() const { return eta_; }
  /// Law of a single eta_k, when expressible (point masses and uniform theta).
  std::optional<DistributionSpec> eta_marginal() const;
  bool is_deterministic() const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::coupled;
  DistributionSpec theta_, alpha_, eta_;
};

/// Pure accessor to one realization: theta(k), alpha(k), eta(k) for any site.
class PhaseSource {
 public:
  PhaseSource(PhaseModel model, std::uint64_t seed) : model_(std::move(model)), seed_(seed) {}
  double theta(std::int64_t k) const;
  double alpha(std::int64_t k) const;
  double eta(std::int64_t k) const;
  const PhaseModel& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }

 private:
  PhaseModel model_;
  std::uint64_t seed_;
};

/// Materialized phases over a window of sites.
class PhaseField {
 public:
  PhaseField() = default;
  static PhaseField materialize(const PhaseSource& source, Window window);
  /// Explicit eta values for sites [lo, lo + eta.size()); theta and alpha are absent.
  static PhaseField from_eta(std::int64_t lo, std::vector<double> eta);

  const Window& window() const { return window_; }
  bool has_theta_alpha() const { return !theta_.empty(); }
  double eta(std::int64_t k) const;
  /// theta, alpha are stored over [lo - 1, hi).
  double theta(std::int64_t k) const;
  double alpha(std::int64_t k) const;
  const std::vector<double>& eta_values() const { return eta_; }

  PhaseField with_eta(std::int64_t k, double value) const;
  /// Same eta sequence relabelled: new eta(k) = old eta(k + shift).
  PhaseField shifted(std::int64_t shift) const;
  /// max_k |eta_k - (theta_k + theta_{k-1} + alpha_k - alpha_{k-1}) mod 2pi|.
  double consistency_defect() const;

  /// Columns: site theta alpha eta.
  void write_columns(std::ostream& out) const;

 private:
  Window window_;
  std::vector<double> theta_, alpha_, eta_;
};

PhaseField sample_phases(const DistributionSpec& dist_theta, const DistributionSpec& dist_alpha,
                         Window window, std::uint64_t seed);
PhaseField sample_iid_phases(const DistributionSpec& mu, Window window, std::uint64_t seed);

struct CharEstimate {
  int order = 0;
  cplx value;
  double stderr_ = 0.0;
  /// mean of e^{in(eta_k + eta_{k+1})}, for joint-independence checks.
  cplx joint;
  double joint_stderr = 0.0;
};

/// Empirical characteristic function of eta pooled over fields.
std::vector<CharEstimate> phase_char_fn(std::span<const PhaseField> fields, std::span<const int> orders);

enum class Boundary { open, periodic, isolated };

/// Five-diagonal matrix on a window. Local indices 0..n-1 map to sites lo..hi-1.
class BandUnitary {
 public:
  using Band = std::array<cplx, 5>;  // band[i][d] = U(i, i + d - 2)

  BandUnitary() = default;
  BandUnitary(Window window, Coefficients params, Boundary boundary, std::vector<Band> rows,
              std::string boundary_note = {}, std::vector<double> eta = {});

  std::size_t dimension() const { return rows_.size(); }
  const Window& window() const { return window_; }
  const Coefficients& params() const { return params_; }
  Boundary boundary() const { return boundary_; }
  const std::string& boundary_note() const { return note_; }
  /// eta over the window sites, when built from phases.
  const std::vector<double>& eta_snapshot() const { return eta_; }

  /// Entry by local indices; 0 outside the band.
  cplx operator()(std::size_t i, std::size_t j) const;
  /// Entry by site labels.
  cplx at_sites(std::int64_t row, std::int64_t col) const;
  const Band& band_row(std::size_t i) const { return rows_[i]; }
  /// Local column index for (row i, band slot d), or -1 if it falls outside.
  std::int64_t column_of(std::size_t i, int d) const;

  std::vector<cplx> apply(std::span<const cplx> v) const;
  std::vector<cplx> apply_adjoint(std::span<const cplx> v) const;
  /// Column-major dense copy.
  std::vector<cplx> dense() const;
  /// Bound on the operator norm of (U U* - I) restricted to interior rows.
  double unitarity_defect() const;
  /// Rows whose full stencil lies in the window.
  std::size_t interior_begin() const;
  std::size_t interior_end() const;

 private:
  Window window_;
  Coefficients params_{Coefficients::balanced()};
  Boundary boundary_ = Boundary::open;
  std::vector<Band> rows_;
  std::string note_;
  std::vector<double> eta_;
};

namespace detail {
struct ColumnEntry {
  std::int64_t row;
  cplx value;
  std::int64_t phase_site;
};
/// The four nonzero entries of column c of the free operator and the site
/// whose e^{-i eta} multiplies each.
std::array<ColumnEntry, 4> free_column(std::int64_t c, const Coefficients& p);
}  // namespace detail

/// The operator restricted to `window`. Open windows drop the couplings that
/// leave the window and need eta on [lo - 1, hi + 1); periodic ones wrap the
/// sites modulo the window (even size, at least 6) and need eta on the window.
BandUnitary build_u(const Coefficients& params, const PhaseField& phases, Window window,
                    Boundary boundary = Boundary::open);
BandUnitary build_free(const Coefficients& params, Window window, Boundary boundary = Boundary::open);

struct Factorization {
  std::vector<cplx> d;  // diagonal of D
  BandUnitary s0;
  BandUnitary v;
  double residual = 0.0;  // max entry of U - V^{-1} D S0 V
};

/// U = V^{-1} D S0 V for a periodic window with even lo and even size.
Factorization factorize(const BandUnitary& u);

/// Product of two band matrices on the same window; must stay five-diagonal.
BandUnitary multiply(const BandUnitary& a, const BandUnitary& b);

}  // namespace unidos
