#include "unidos/model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "unidos/rng.hpp"

namespace unidos {

namespace {

constexpr double kCoeffTol = 1e-12;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw ConfigError(std::string(what) + " must be finite");
}

}  // namespace

// ---------------------------------------------------------------- Coefficients

Coefficients::Coefficients(double r, double t) : r_(r), t_(t) {
  require_finite(r, "r");
  require_finite(t, "t");
  if (!(r > 0.0 && r < 1.0) || !(t > 0.0 && t < 1.0))
    throw ConfigError("coefficients r, t must lie in (0, 1)");
  if (std::abs(r * r + t * t - 1.0) > kCoeffTol)
    throw ConfigError("coefficients must satisfy r^2 + t^2 = 1");
}

Coefficients Coefficients::from_r(double r) {
  require_finite(r, "r");
  if (!(r > 0.0 && r < 1.0)) throw ConfigError("r must lie in (0, 1)");
  return Coefficients(r, std::sqrt((1.0 - r) * (1.0 + r)));
}

Coefficients Coefficients::balanced() { return Coefficients(std::sqrt(0.5), std::sqrt(0.5)); }

double Coefficients::band_edge() const { return std::acos(std::clamp(r_ * r_ - t_ * t_, -1.0, 1.0)); }

// ------------------------------------------------------------ DistributionSpec

DistributionSpec DistributionSpec::uniform() { return {}; }

DistributionSpec DistributionSpec::point_mass(double c) {
  require_finite(c, "point mass location");
  DistributionSpec d;
  d.kind_ = Kind::point_mass;
  d.center_ = wrap_phase(c);
  d.half_width_ = 0.0;
  return d;
}

DistributionSpec DistributionSpec::arc(double center, double half_width) {
  require_finite(center, "arc center");
  require_finite(half_width, "arc half-width");
  if (!(half_width > 0.0) || half_width > kPi) throw ConfigError("arc half-width must lie in (0, pi]");
  DistributionSpec d;
  d.kind_ = Kind::arc;
  d.center_ = wrap_phase(center);
  d.half_width_ = half_width;
  d.density_max_ = 1.0 / (2.0 * half_width);
  return d;
}

DistributionSpec DistributionSpec::fourier_density(double A, double B, std::vector<cplx> coefficients) {
  require_finite(A, "A");
  require_finite(B, "B");
  if (A < 1.0) throw ConfigError("fourier density needs A >= 1");
  if (B < 0.0) throw ConfigError("fourier density needs B >= 0");
  double bound = 1.0;
  for (std::size_t n = 1; n <= coefficients.size(); ++n) {
    const cplx& c = coefficients[n - 1];
    require_finite(c.real(), "fourier coefficient");
    require_finite(c.imag(), "fourier coefficient");
    if (std::abs(c) > A * std::exp(-B * static_cast<double>(n)) * (1.0 + 1e-12))
      throw ConfigError("fourier coefficient " + std::to_string(n) + " exceeds A exp(-B n)");
    bound += 2.0 * std::abs(c);
  }
  DistributionSpec d;
  d.kind_ = Kind::fourier_density;
  d.A_ = A;
  d.B_ = B;
  d.coeffs_ = std::move(coefficients);
  d.density_max_ = bound / kTwoPi;
  constexpr int grid = 4096;
  for (int i = 0; i < grid; ++i) {
    double x = -kPi + kTwoPi * (i + 0.5) / grid;
    if (d.density(x) < -1e-12) throw ConfigError("fourier density is negative somewhere");
  }
  return d;
}

double DistributionSpec::sample(std::uint64_t seed, std::uint64_t tag, std::int64_t site) const {
  switch (kind_) {
    case Kind::uniform:
      return wrap_phase(kTwoPi * rng::uniform01(seed, tag, site) - kPi);
    case Kind::point_mass:
      return center_;
    case Kind::arc:
      return wrap_phase(center_ + half_width_ * (2.0 * rng::uniform01(seed, tag, site) - 1.0));
    case Kind::fourier_density:
      for (std::uint64_t draw = 0;; draw += 2) {
        double x = kTwoPi * rng::uniform01(seed, tag, site, draw) - kPi;
        double v = density_max_ * rng::uniform01(seed, tag, site, draw + 1);
        if (v < density(x)) return wrap_phase(x);
      }
  }
  return 0.0;
}

cplx DistributionSpec::characteristic(int n) const {
  if (n == 0) return 1.0;
  switch (kind_) {
    case Kind::uniform:
      return 0.0;
    case Kind::point_mass:
      return unit(n * center_);
    case Kind::arc: {
      double x = n * half_width_;
      return unit(n * center_) * (std::sin(x) / x);
    }
    case Kind::fourier_density: {
      std::size_t m = static_cast<std::size_t>(std::abs(n));
      if (m > coeffs_.size()) return 0.0;
      return n > 0 ? coeffs_[m - 1] : std::conj(coeffs_[m - 1]);
    }
  }
  return 0.0;
}

double DistributionSpec::density(double x) const {
  switch (kind_) {
    case Kind::uniform:
      return 1.0 / kTwoPi;
    case Kind::point_mass:
      throw UsageError("a point mass has no density");
    case Kind::arc:
      return circle_distance(x, center_) <= half_width_ ? 1.0 / (2.0 * half_width_) : 0.0;
    case Kind::fourier_density: {
      double s = 1.0;
      for (std::size_t n = 1; n <= coeffs_.size(); ++n)
        s += 2.0 * (coeffs_[n - 1] * unit(-static_cast<double>(n) * x)).real();
      return s / kTwoPi;
    }
  }
  return 0.0;
}

ArcSet DistributionSpec::support() const {
  switch (kind_) {
    case Kind::uniform:
      return ArcSet::full();
    case Kind::point_mass:
      return ArcSet({Arc{center_, center_}});
    case Kind::arc:
      return ArcSet({Arc{center_ - half_width_, center_ + half_width_}});
    case Kind::fourier_density: {
      constexpr int grid = 4096;
      const double h = kTwoPi / grid;
      std::vector<Arc> arcs;
      bool open = false;
      for (int i = 0; i < grid; ++i) {
        double x = -kPi + h * (i + 0.5);
        bool pos = density(x) > 1e-12;
        if (pos && !open) arcs.push_back(Arc{x - 0.5 * h, x + 0.5 * h});
        if (pos) arcs.back().hi = x + 0.5 * h;
        open = pos;
      }
      return ArcSet(std::move(arcs));
    }
  }
  return {};
}

std::string DistributionSpec::describe() const {
  std::ostringstream os;
  os << std::setprecision(17);
  switch (kind_) {
    case Kind::uniform:
      os << "uniform";
      break;
    case Kind::point_mass:
      os << "point_mass(" << center_ << ")";
      break;
    case Kind::arc:
      os << "arc(" << center_ << "," << half_width_ << ")";
      break;
    case Kind::fourier_density:
      os << "fourier_density(A=" << A_ << ",B=" << B_ << ",terms=" << coeffs_.size() << ")";
      break;
  }
  return os.str();
}

// ------------------------------------------------------------------ PhaseModel

PhaseModel PhaseModel::coupled(DistributionSpec theta, DistributionSpec alpha) {
  PhaseModel m;
  m.kind_ = Kind::coupled;
  m.theta_ = std::move(theta);
  m.alpha_ = std::move(alpha);
  return m;
}

PhaseModel PhaseModel::iid(DistributionSpec eta) {
  PhaseModel m;
  m.kind_ = Kind::iid_eta;
  m.eta_ = std::move(eta);
  return m;
}

std::optional<DistributionSpec> PhaseModel::eta_marginal() const {
  if (kind_ == Kind::iid_eta) return eta_;
  if (theta_.kind() == DistributionSpec::Kind::uniform) return DistributionSpec::uniform();
  if (theta_.is_degenerate() && alpha_.is_degenerate())
    return DistributionSpec::point_mass(2.0 * theta_.center());
  return std::nullopt;
}

bool PhaseModel::is_deterministic() const {
  return kind_ == Kind::iid_eta ? eta_.is_degenerate() : theta_.is_degenerate() && alpha_.is_degenerate();
}

std::string PhaseModel::describe() const {
  if (kind_ == Kind::iid_eta) return "iid_eta[" + eta_.describe() + "]";
  return "coupled[theta=" + theta_.describe() + ",alpha=" + alpha_.describe() + "]";
}

// ------------------------------------------------------------------ PhaseSource

double PhaseSource::theta(std::int64_t k) const {
  if (model_.kind() != PhaseModel::Kind::coupled) return 0.0;
  return model_.theta().sample(seed_, rng::kTheta, k);
}

double PhaseSource::alpha(std::int64_t k) const {
  if (model_.kind() != PhaseModel::Kind::coupled) return 0.0;
  return model_.alpha().sample(seed_, rng::kAlpha, k);
}

double PhaseSource::eta(std::int64_t k) const {
  if (model_.kind() == PhaseModel::Kind::iid_eta) return model_.eta().sample(seed_, rng::kEta, k);
  return wrap_phase(theta(k) + theta(k - 1) + alpha(k) - alpha(k - 1));
}

// ------------------------------------------------------------------- PhaseField

PhaseField PhaseField::materialize(const PhaseSource& source, Window window) {
  if (window.empty()) throw UsageError("phase window is empty");
  PhaseField f;
  f.window_ = window;
  const auto n = static_cast<std::size_t>(window.size());
  f.eta_.resize(n);
  if (source.model().kind() == PhaseModel::Kind::coupled) {
    f.theta_.resize(n + 1);
    f.alpha_.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      std::int64_t k = window.lo - 1 + static_cast<std::int64_t>(i);
      f.theta_[i] = source.theta(k);
      f.alpha_[i] = source.alpha(k);
    }
    for (std::size_t i = 0; i < n; ++i)
      f.eta_[i] = wrap_phase(f.theta_[i + 1] + f.theta_[i] + f.alpha_[i + 1] - f.alpha_[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) f.eta_[i] = source.eta(window.lo + static_cast<std::int64_t>(i));
  }
  return f;
}

PhaseField PhaseField::from_eta(std::int64_t lo, std::vector<double> eta) {
  if (eta.empty()) throw UsageError("phase window is empty");
  PhaseField f;
  f.window_ = Window{lo, lo + static_cast<std::int64_t>(eta.size())};
  for (auto& e : eta) e = wrap_phase(e);
  f.eta_ = std::move(eta);
  return f;
}

double PhaseField::eta(std::int64_t k) const {
  if (!window_.contains(k))
    throw UsageError("eta requested at site " + std::to_string(k) + " outside the phase window");
  return eta_[static_cast<std::size_t>(k - window_.lo)];
}

double PhaseField::theta(std::int64_t k) const {
  if (theta_.empty() || k < window_.lo - 1 || k >= window_.hi) throw UsageError("theta not available at site");
  return theta_[static_cast<std::size_t>(k - window_.lo + 1)];
}

double PhaseField::alpha(std::int64_t k) const {
  if (alpha_.empty() || k < window_.lo - 1 || k >= window_.hi) throw UsageError("alpha not available at site");
  return alpha_[static_cast<std::size_t>(k - window_.lo + 1)];
}

PhaseField PhaseField::with_eta(std::int64_t k, double value) const {
  PhaseField f = *this;
  if (!window_.contains(k)) throw UsageError("with_eta outside the phase window");
  f.eta_[static_cast<std::size_t>(k - window_.lo)] = wrap_phase(value);
  f.theta_.clear();
  f.alpha_.clear();
  return f;
}

PhaseField PhaseField::shifted(std::int64_t shift) const {
  PhaseField f = *this;
  f.window_.lo -= shift;
  f.window_.hi -= shift;
  return f;
}

double PhaseField::consistency_defect() const {
  if (theta_.empty()) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < eta_.size(); ++i) {
    double e = theta_[i + 1] + theta_[i] + alpha_[i + 1] - alpha_[i];
    worst = std::max(worst, circle_distance(e, eta_[i]));
  }
  return worst;
}

void PhaseField::write_columns(std::ostream& out) const {
  out << "# site theta alpha eta\n" << std::setprecision(17);
  for (std::int64_t k = window_.lo; k < window_.hi; ++k) {
    out << k << ' ';
    if (has_theta_alpha())
      out << theta(k) << ' ' << alpha(k);
    else
      out << "nan nan";
    out << ' ' << eta(k) << '\n';
  }
}

PhaseField sample_phases(const DistributionSpec& dist_theta, const DistributionSpec& dist_alpha, Window window,
                         std::uint64_t seed) {
  return PhaseField::materialize(PhaseSource(PhaseModel::coupled(dist_theta, dist_alpha), seed), window);
}

PhaseField sample_iid_phases(const DistributionSpec& mu, Window window, std::uint64_t seed) {
  return PhaseField::materialize(PhaseSource(PhaseModel::iid(mu), seed), window);
}

std::vector<CharEstimate> phase_char_fn(std::span<const PhaseField> fields, std::span<const int> orders) {
  std::size_t total = 0, pairs = 0;
  for (const auto& f : fields) {
    total += f.eta_values().size();
    if (!f.eta_values().empty()) pairs += f.eta_values().size() - 1;
  }
  if (total == 0) throw UsageError("phase_char_fn needs samples");
  if (total < 1000) throw UsageError("phase_char_fn needs at least 1000 samples");
  std::vector<CharEstimate> out;
  for (int n : orders) {
    CharEstimate est;
    est.order = n;
    cplx s = 0.0, sj = 0.0;
    for (const auto& f : fields) {
      const auto& e = f.eta_values();
      for (std::size_t i = 0; i < e.size(); ++i) {
        s += unit(n * e[i]);
        if (i + 1 < e.size()) sj += unit(n * (e[i] + e[i + 1]));
      }
    }
    est.value = s / static_cast<double>(total);
    est.joint = pairs ? sj / static_cast<double>(pairs) : cplx(0.0);
    double v = 0.0, vj = 0.0;
    for (const auto& f : fields) {
      const auto& e = f.eta_values();
      for (std::size_t i = 0; i < e.size(); ++i) {
        v += std::norm(unit(n * e[i]) - est.value);
        if (i + 1 < e.size()) vj += std::norm(unit(n * (e[i] + e[i + 1])) - est.joint);
      }
    }
    est.stderr_ = std::sqrt(v / static_cast<double>(total)) / std::sqrt(static_cast<double>(total));
    est.joint_stderr = pairs ? std::sqrt(vj / static_cast<double>(pairs)) / std::sqrt(static_cast<double>(pairs)) : 0.0;
    if (n == 0) {
      est.value = 1.0;
      est.stderr_ = 0.0;
    }
    out.push_back(est);
  }
  return out;
}

// ------------------------------------------------------------------ BandUnitary

BandUnitary::BandUnitary(Window window, Coefficients params, Boundary boundary, std::vector<Band> rows,
                         std::string boundary_note, std::vector<double> eta)
    : window_(window),
      params_(params),
      boundary_(boundary),
      rows_(std::move(rows)),
      note_(std::move(boundary_note)),
      eta_(std::move(eta)) {
  if (static_cast<std::int64_t>(rows_.size()) != window_.size()) throw UsageError("band rows do not match window");
  if (boundary_ == Boundary::periodic && rows_.size() < 6) throw UsageError("periodic window needs at least 6 sites");
}

std::int64_t BandUnitary::column_of(std::size_t i, int d) const {
  const auto n = static_cast<std::int64_t>(rows_.size());
  std::int64_t j = static_cast<std::int64_t>(i) + d - 2;
  if (boundary_ == Boundary::periodic) return ((j % n) + n) % n;
  return (j < 0 || j >= n) ? -1 : j;
}

cplx BandUnitary::operator()(std::size_t i, std::size_t j) const {
  const auto n = static_cast<std::int64_t>(rows_.size());
  if (i >= rows_.size() || j >= rows_.size()) return 0.0;
  std::int64_t off = static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i);
  if (boundary_ == Boundary::periodic) {
    off = ((off % n) + n) % n;
    if (off > n / 2) off -= n;
  }
  if (off < -2 || off > 2) return 0.0;
  return rows_[i][static_cast<std::size_t>(off + 2)];
}

cplx BandUnitary::at_sites(std::int64_t row, std::int64_t col) const {
  if (!window_.contains(row) || !window_.contains(col)) return 0.0;
  return (*this)(static_cast<std::size_t>(row - window_.lo), static_cast<std::size_t>(col - window_.lo));
}

std::vector<cplx> BandUnitary::apply(std::span<const cplx> v) const {
  if (v.size() != rows_.size()) throw UsageError("apply: dimension mismatch");
  std::vector<cplx> out(v.size(), 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    cplx s = 0.0;
    for (int d = 0; d < 5; ++d) {
      std::int64_t j = column_of(i, d);
      if (j >= 0 && rows_[i][d] != 0.0) s += rows_[i][d] * v[static_cast<std::size_t>(j)];
    }
    out[i] = s;
  }
  return out;
}

std::vector<cplx> BandUnitary::apply_adjoint(std::span<const cplx> v) const {
  if (v.size() != rows_.size()) throw UsageError("apply_adjoint: dimension mismatch");
  std::vector<cplx> out(v.size(), 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (int d = 0; d < 5; ++d) {
      std::int64_t j = column_of(i, d);
      if (j >= 0 && rows_[i][d] != 0.0) out[static_cast<std::size_t>(j)] += std::conj(rows_[i][d]) * v[i];
    }
  }
  return out;
}

std::vector<cplx> BandUnitary::dense() const {
  const std::size_t n = rows_.size();
  std::vector<cplx> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (int d = 0; d < 5; ++d) {
      std::int64_t j = column_of(i, d);
      if (j >= 0) a[static_cast<std::size_t>(j) * n + i] += rows_[i][d];
    }
  return a;
}

std::size_t BandUnitary::interior_begin() const { return boundary_ == Boundary::open ? 2 : 0; }

std::size_t BandUnitary::interior_end() const {
  if (boundary_ != Boundary::open) return rows_.size();
  return rows_.size() > 2 ? rows_.size() - 2 : 0;
}

double BandUnitary::unitarity_defect() const {
  const std::size_t n = rows_.size();
  const auto sn = static_cast<std::int64_t>(n);
  auto wrap = [&](std::int64_t j) -> std::int64_t {
    if (boundary_ == Boundary::periodic) return ((j % sn) + sn) % sn;
    return (j < 0 || j >= sn) ? -1 : j;
  };
  // Columns as sparse lists for U*U.
  std::vector<std::vector<std::pair<std::size_t, cplx>>> cols(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int d = 0; d < 5; ++d) {
      std::int64_t j = column_of(i, d);
      if (j >= 0 && rows_[i][d] != 0.0) cols[static_cast<std::size_t>(j)].push_back({i, rows_[i][d]});
    }
  double worst = 0.0;
  for (std::size_t i = interior_begin(); i < interior_end(); ++i) {
    std::vector<std::size_t> near;
    for (std::int64_t off = -4; off <= 4; ++off) {
      std::int64_t k = wrap(static_cast<std::int64_t>(i) + off);
      if (k >= 0 && std::find(near.begin(), near.end(), static_cast<std::size_t>(k)) == near.end())
        near.push_back(static_cast<std::size_t>(k));
    }
    double row_sum = 0.0, col_sum = 0.0;
    for (std::size_t k : near) {
      cplx uu = 0.0;
      for (int d = 0; d < 5; ++d) {
        std::int64_t j = column_of(i, d);
        if (j >= 0) uu += rows_[i][d] * std::conj((*this)(k, static_cast<std::size_t>(j)));
      }
      cplx cc = 0.0;
      for (const auto& [row, val] : cols[i]) cc += std::conj(val) * (*this)(row, k);
      double delta = (k == i) ? 1.0 : 0.0;
      row_sum += std::abs(uu - delta);
      col_sum += std::abs(cc - delta);
    }
    worst = std::max({worst, row_sum, col_sum});
  }
  return worst;
}

namespace detail {

std::array<ColumnEntry, 4> free_column(std::int64_t c, const Coefficients& p) {
  const double r = p.r(), t = p.t();
  const cplx I(0.0, 1.0);
  const std::int64_t q = (c >= 0) ? c / 2 : -((-c + 1) / 2);  // floor(c / 2)
  const std::int64_t e = 2 * q;
  if (c == e) {
    return {{{e - 1, I * r * t, e}, {e, r * r, e}, {e + 1, I * r * t, e + 1}, {e + 2, -t * t, e + 1}}};
  }
  return {{{e - 1, -t * t, e}, {e, I * r * t, e}, {e + 1, r * r, e + 1}, {e + 2, I * r * t, e + 1}}};
}

}  // namespace detail

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t n) { return ((a % n) + n) % n; }

}  // namespace

BandUnitary build_u(const Coefficients& params, const PhaseField& phases, Window window, Boundary boundary) {
  if (window.empty()) throw UsageError("build_u: empty window");
  const std::int64_t n = window.size();
  if (boundary == Boundary::periodic) {
    if (n < 6 || n % 2 != 0 || floor_mod(window.lo, 2) != 0)
      throw UsageError("build_u: periodic window needs even lo and even size >= 6");
    if (!phases.window().contains(window)) throw UsageError("build_u: phases do not cover the window");
  } else if (boundary == Boundary::open) {
    if (!phases.window().contains(Window{window.lo - 1, window.hi + 1}))
      throw UsageError("build_u: phases must cover [lo - 1, hi + 1)");
  } else {
    throw UsageError("build_u: isolated blocks come from truncate()");
  }
  std::vector<BandUnitary::Band> rows(static_cast<std::size_t>(n));
  for (auto& row : rows) row.fill(0.0);
  for (std::int64_t c = window.lo; c < window.hi; ++c) {
    for (const auto& ent : detail::free_column(c, params)) {
      std::int64_t row = ent.row, site = ent.phase_site;
      if (boundary == Boundary::periodic) {
        row = window.lo + floor_mod(row - window.lo, n);
        site = window.lo + floor_mod(site - window.lo, n);
      } else if (!window.contains(row)) {
        continue;
      }
      std::int64_t i = row - window.lo, j = c - window.lo;
      std::int64_t off = j - i;
      if (boundary == Boundary::periodic) {
        off = floor_mod(off, n);
        if (off > n / 2) off -= n;
      }
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(off + 2)] = ent.value * unit(-phases.eta(site));
    }
  }
  std::vector<double> snapshot;
  snapshot.reserve(static_cast<std::size_t>(n));
  for (std::int64_t k = window.lo; k < window.hi; ++k) snapshot.push_back(phases.eta(k));
  return BandUnitary(window, params, boundary, std::move(rows),
                     boundary == Boundary::periodic ? "periodic" : "open", std::move(snapshot));
}

BandUnitary build_free(const Coefficients& params, Window window, Boundary boundary) {
  PhaseField zero = PhaseField::from_eta(window.lo - 1, std::vector<double>(static_cast<std::size_t>(window.size() + 2), 0.0));
  return build_u(params, zero, window, boundary);
}

BandUnitary multiply(const BandUnitary& a, const BandUnitary& b) {
  if (a.window() != b.window() || a.boundary() != b.boundary()) throw UsageError("multiply: operands differ in shape");
  const std::size_t n = a.dimension();
  std::vector<BandUnitary::Band> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].fill(0.0);
    std::vector<std::pair<std::int64_t, cplx>> acc;
    for (int d = 0; d < 5; ++d) {
      std::int64_t m = a.column_of(i, d);
      if (m < 0 || a.band_row(i)[d] == 0.0) continue;
      for (int e = 0; e < 5; ++e) {
        std::int64_t j = b.column_of(static_cast<std::size_t>(m), e);
        if (j < 0 || b.band_row(static_cast<std::size_t>(m))[e] == 0.0) continue;
        acc.push_back({j, a.band_row(i)[d] * b.band_row(static_cast<std::size_t>(m))[e]});
      }
    }
    for (const auto& [j, v] : acc) {
      bool placed = false;
      for (int d = 0; d < 5; ++d)
        if (a.column_of(i, d) == j) {
          rows[i][d] += v;
          placed = true;
          break;
        }
      if (!placed && std::abs(v) > 0.0) throw UsageError("multiply: product leaves the five-diagonal band");
    }
  }
  return BandUnitary(a.window(), a.params(), a.boundary(), std::move(rows), a.boundary_note());
}

Factorization factorize(const BandUnitary& u) {
  const std::size_t n = u.dimension();
  if (u.boundary() != Boundary::periodic || n % 2 != 0 || floor_mod(u.window().lo, 2) != 0)
    throw UsageError("factorize: needs a periodic window with even lo and even dimension");
  if (u.eta_snapshot().size() != n) throw UsageError("factorize: matrix carries no phase snapshot");
  const double r = u.params().r(), t = u.params().t();
  const cplx I(0.0, 1.0);
  using Band = BandUnitary::Band;
  auto empty_rows = [&] {
    std::vector<Band> rows(n);
    for (auto& row : rows) row.fill(0.0);
    return rows;
  };
  // Slot of offset o in a band row is o + 2; local parity equals site parity.
  std::vector<Band> r0 = empty_rows(), c = empty_rows(), v = empty_rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 1) {  // first of an odd-anchored pair (i, i+1)
      r0[i][2] = -I * r;
      r0[i][3] = I * t;
      v[i][2] = I * r;
      v[i][3] = t;
      c[i][1] = -t;
      c[i][2] = I * r;
    } else {
      r0[i][1] = t;
      r0[i][2] = r;
      v[i][1] = -I * t;
      v[i][2] = r;
      c[i][2] = r;
      c[i][3] = I * t;
    }
  }
  const Window w = u.window();
  BandUnitary R0(w, u.params(), Boundary::periodic, std::move(r0));
  BandUnitary C(w, u.params(), Boundary::periodic, std::move(c));
  Factorization f;
  f.v = BandUnitary(w, u.params(), Boundary::periodic, std::move(v), "block rotation");
  f.s0 = multiply(C, R0);
  f.d.resize(n);
  for (std::size_t k = 0; k < n; ++k) f.d[k] = unit(-u.eta_snapshot()[k]);
  double worst = 0.0;
  std::vector<cplx> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), cplx(0.0));
    e[j] = 1.0;
    auto y = f.v.apply(e);
    y = f.s0.apply(y);
    for (std::size_t k = 0; k < n; ++k) y[k] *= f.d[k];
    y = f.v.apply_adjoint(y);
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(y[i] - u(i, j)));
  }
  f.residual = worst;
  return f;
}

}  // namespace unidos
