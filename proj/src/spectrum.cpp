#include "unidos/spectrum.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <map>
#include <numeric>

#include "unidos/linalg.hpp"
#include "unidos/parallel.hpp"
#include "unidos/rng.hpp"
#include "unidos/transfer.hpp"

namespace unidos {

namespace {

const cplx I(0.0, 1.0);

bool is_even(std::int64_t n) { return n % 2 == 0; }

// eta with the boundary prescription applied at the cuts M and N.
PhaseField cut_phases(const PhaseField& phases, std::int64_t M, std::int64_t N) {
  if (N - M <= 4) throw UsageError("truncation needs N - M > 4");
  if (!phases.window().contains(Window{M - 1, N + 3}))
    throw UsageError("truncation needs eta on [M - 1, N + 3)");
  std::vector<double> eta;
  for (std::int64_t s = M - 1; s < N + 3; ++s) eta.push_back(phases.eta(s));
  PhaseField out = PhaseField::from_eta(M - 1, std::move(eta));
  for (std::int64_t cut : {M, N}) {
    if (is_even(cut)) {
      for (std::int64_t s = cut - 1; s <= cut + 2; ++s) out = out.with_eta(s, 0.0);
    } else {
      out = out.with_eta(cut, 0.0).with_eta(cut + 1, 0.0);
    }
  }
  return out;
}

using Column = std::vector<std::pair<std::int64_t, cplx>>;

// Replacement columns next to a cut between sites `cut` and `cut + 1`.
std::map<std::int64_t, Column> cut_columns(std::int64_t cut, const PhaseField& et, const Coefficients& p) {
  const double r = p.r(), t = p.t();
  std::map<std::int64_t, Column> d;
  if (is_even(cut)) {
    const std::int64_t n = cut;
    d[n] = {{n - 1, I * t}, {n, r}};
    d[n + 1] = {{n + 1, r}, {n + 2, I * t}};
  } else {
    const std::int64_t n = cut - 1;
    const cplx e0 = unit(-et.eta(n)), e3 = unit(-et.eta(n + 3));
    d[n] = {{n - 1, I * r * t * e0}, {n, r * r * e0}, {n + 1, I * t}};
    d[n + 1] = {{n - 1, -t * t * e0}, {n, I * r * t * e0}, {n + 1, r}};
    d[n + 2] = {{n + 2, r}, {n + 3, I * r * t * e3}, {n + 4, -t * t * e3}};
    d[n + 3] = {{n + 2, I * t}, {n + 3, r * r * e3}, {n + 4, I * r * t * e3}};
  }
  return d;
}

LaurentPoly<cplx> trim_relative(const LaurentPoly<cplx>& p, double rel) {
  if (p.is_zero()) return p;
  double big = 0.0;
  for (const auto& c : p.coefficients()) big = std::max(big, std::abs(c));
  std::vector<cplx> c = p.coefficients();
  for (auto& v : c)
    if (std::abs(v) <= rel * big) v = 0.0;
  // Only the ends are dropped; interior coefficients are kept as computed.
  std::vector<cplx> orig = p.coefficients();
  std::size_t first = 0, last = c.size();
  while (first < last && c[first] == 0.0) ++first;
  while (last > first && c[last - 1] == 0.0) --last;
  return LaurentPoly<cplx>(p.low() + static_cast<std::int64_t>(first),
                           std::vector<cplx>(orig.begin() + static_cast<std::ptrdiff_t>(first),
                                             orig.begin() + static_cast<std::ptrdiff_t>(last)));
}

}  // namespace

// --------------------------------------------------------------------- truncate

TruncatedBlock truncate(const Coefficients& params, const PhaseField& phases, std::int64_t M, std::int64_t N) {
  PhaseField et = cut_phases(phases, M, N);
  std::map<std::int64_t, Column> cols;
  for (std::int64_t c = M + 1; c <= N; ++c) {
    Column col;
    for (const auto& ent : detail::free_column(c, params))
      col.push_back({ent.row, ent.value * unit(-et.eta(ent.phase_site))});
    cols[c] = std::move(col);
  }
  for (std::int64_t cut : {M, N})
    for (auto& [c, col] : cut_columns(cut, et, params))
      if (c >= M + 1 && c <= N) cols[c] = col;

  const Window w{M + 1, N + 1};
  std::vector<BandUnitary::Band> rows(static_cast<std::size_t>(w.size()));
  for (auto& row : rows) row.fill(0.0);
  for (const auto& [c, col] : cols) {
    for (const auto& [row, v] : col) {
      if (!w.contains(row)) {
        if (std::abs(v) > 1e-15) throw NumericError("truncated column leaks outside the block");
        continue;
      }
      std::int64_t off = c - row;
      if (off < -2 || off > 2) throw NumericError("truncated column leaves the band");
      rows[static_cast<std::size_t>(row - w.lo)][static_cast<std::size_t>(off + 2)] = v;
    }
  }
  std::vector<double> snapshot;
  for (std::int64_t s = w.lo; s < w.hi; ++s) snapshot.push_back(et.eta(s));
  std::string note = std::string("cut ") + (is_even(M) ? "even" : "odd") + " at " + std::to_string(M) + ", " +
                     (is_even(N) ? "even" : "odd") + " at " + std::to_string(N);
  TruncatedBlock b;
  b.M = M;
  b.N = N;
  b.matrix = BandUnitary(w, params, Boundary::isolated, std::move(rows), note, std::move(snapshot));
  b.phases = std::move(et);
  return b;
}

// ------------------------------------------------------------- SpectralMeasure

SpectralMeasure SpectralMeasure::from_eigenvalues(std::span<const cplx> eigenvalues, double modulus_tol) {
  std::vector<double> ph;
  ph.reserve(eigenvalues.size());
  double worst = 0.0;
  for (const auto& z : eigenvalues) {
    worst = std::max(worst, std::abs(std::abs(z) - 1.0));
    ph.push_back(wrap_phase(std::arg(z)));
  }
  if (worst > modulus_tol)
    throw NumericError("eigenvalue modulus deviates from 1 by " + std::to_string(worst));
  SpectralMeasure m = from_phases(std::move(ph));
  m.modulus_defect_ = worst;
  return m;
}

SpectralMeasure SpectralMeasure::from_phases(std::vector<double> phases, std::vector<double> weights) {
  if (weights.empty()) weights.assign(phases.size(), phases.empty() ? 0.0 : 1.0 / static_cast<double>(phases.size()));
  if (weights.size() != phases.size()) throw UsageError("phases and weights differ in length");
  std::vector<std::size_t> order(phases.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (auto& p : phases) p = wrap_phase(p);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return phases[a] < phases[b]; });
  SpectralMeasure m;
  m.phases_.reserve(order.size());
  m.weights_.reserve(order.size());
  for (std::size_t i : order) {
    m.phases_.push_back(phases[i]);
    m.weights_.push_back(weights[i]);
  }
  return m;
}

SpectralMeasure SpectralMeasure::pooled(std::span<const SpectralMeasure> parts) {
  std::vector<double> ph, w;
  double defect = 0.0;
  const double share = parts.empty() ? 0.0 : 1.0 / static_cast<double>(parts.size());
  for (const auto& part : parts) {
    double mass = part.total_mass();
    for (std::size_t i = 0; i < part.size(); ++i) {
      ph.push_back(part.phases_[i]);
      w.push_back(part.weights_[i] * share / mass);
    }
    defect = std::max(defect, part.modulus_defect_);
  }
  SpectralMeasure m = from_phases(std::move(ph), std::move(w));
  m.modulus_defect_ = defect;
  return m;
}

double SpectralMeasure::total_mass() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

double SpectralMeasure::integrated(double lam) const {
  if (lam >= kPi) return total_mass();
  if (lam <= -kPi) return 0.0;
  auto end = std::upper_bound(phases_.begin(), phases_.end(), lam);
  return std::accumulate(weights_.begin(), weights_.begin() + (end - phases_.begin()), 0.0);
}

cplx SpectralMeasure::moment(int s) const {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < phases_.size(); ++i) acc += weights_[i] * unit(s * phases_[i]);
  return acc;
}

std::vector<double> SpectralMeasure::histogram(int bins) const {
  if (bins < 1) throw UsageError("histogram needs at least one bin");
  std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
  const double width = kTwoPi / bins;
  for (std::size_t i = 0; i < phases_.size(); ++i) {
    auto b = static_cast<std::int64_t>(std::ceil((phases_[i] + kPi) / width)) - 1;
    b = std::clamp<std::int64_t>(b, 0, bins - 1);
    h[static_cast<std::size_t>(b)] += weights_[i];
  }
  return h;
}

double SpectralMeasure::ks_distance(const std::function<double(double)>& cdf) const {
  double worst = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < phases_.size(); ++i) {
    double f = cdf(phases_[i]);
    worst = std::max(worst, std::abs(acc - f));
    acc += weights_[i];
    // Ties: only compare after the last atom at this location.
    if (i + 1 < phases_.size() && phases_[i + 1] == phases_[i]) continue;
    worst = std::max(worst, std::abs(acc - f));
  }
  return worst;
}

double SpectralMeasure::ks_distance(const SpectralMeasure& other) const {
  std::size_t i = 0, j = 0;
  double fa = 0.0, fb = 0.0, worst = 0.0;
  while (i < phases_.size() || j < other.phases_.size()) {
    double x = std::min(i < phases_.size() ? phases_[i] : kPi * 2, j < other.phases_.size() ? other.phases_[j] : kPi * 2);
    while (i < phases_.size() && phases_[i] == x) fa += weights_[i++];
    while (j < other.phases_.size() && other.phases_[j] == x) fb += other.weights_[j++];
    worst = std::max(worst, std::abs(fa - fb));
  }
  return worst;
}

SpectralMeasure eigenphases(const TruncatedBlock& block) {
  auto ev = dense_eigenvalues(block.matrix.dense(), block.matrix.dimension());
  return SpectralMeasure::from_eigenvalues(ev, 1e-8);
}

double integrated_dos(const SpectralMeasure& measure, double lam) {
  if (measure.empty()) throw UsageError("integrated_dos: empty measure");
  return measure.integrated(lam);
}

// -------------------------------------------------------------- secular route

LaurentVec2<cplx> boundary_vector(int j, const Coefficients& p) {
  const double r = p.r(), t = p.t(), t2 = t * t;
  using L = LaurentPoly<cplx>;
  // b1 = (1/t^2)(-it(r - 1/z), (r - z) + r(r - 1/z))
  L b1u(-1, {I / t, -I * r / t});
  L b1v(-1, {-r / t2, (r + r * r) / t2, -1.0 / t2});
  // b2 = (1, (z - r)/(it))
  L b2u = L::constant(1.0);
  L b2v(0, {I * r / t, -I / t});
  switch (j) {
    case 1:
      return {b1u, b1v};
    case 2:
      return {b2u, b2v};
    case 3:
      return {b1v, b1u};
    case 4:
      return {b2v, b2u};
    default:
      throw UsageError("boundary vector index must be 1..4");
  }
}

LaurentVec2<cplx> adjoint_boundary_vector(int j, const Coefficients& p) {
  auto b = boundary_vector(j, p);
  auto invert = [](const LaurentPoly<cplx>& q) {
    std::vector<cplx> c(q.coefficients().rbegin(), q.coefficients().rend());
    return LaurentPoly<cplx>(-q.high(), std::move(c));
  };
  return {invert(b.u), invert(b.v)};
}

namespace {

// Continuation off the circle of conj(a(z))^T, a row of Laurent polynomials.
LaurentPoly<cplx> conj_row(const LaurentPoly<cplx>& a) {
  std::vector<cplx> c;
  for (auto it = a.coefficients().rbegin(); it != a.coefficients().rend(); ++it) c.push_back(std::conj(*it));
  return LaurentPoly<cplx>(-a.high(), std::move(c));
}

}  // namespace

namespace {

struct SecularSetup {
  SecularPolynomial sp;
  std::vector<LaurentMat2<cplx>> steps;  // T(m0+2), ..., T(n0-1)
  LaurentVec2<cplx> b;
  LaurentPoly<cplx> row_u, row_v;
};

SecularSetup secular_setup(const PhaseField& phases, const Coefficients& params, std::int64_t M, std::int64_t N) {
  PhaseField et = cut_phases(phases, M, N);
  SecularSetup s;
  auto& sp = s.sp;
  sp.k = is_even(M) ? 1 : 2;
  sp.m0 = is_even(M) ? M / 2 : (M - 1) / 2;
  sp.j = is_even(N) ? 1 : 2;
  sp.n0 = is_even(N) ? N / 2 : (N + 1) / 2;
  for (std::int64_t kk = sp.m0 + 2; kk <= sp.n0 - 1; ++kk)
    s.steps.push_back(transfer_laurent(et.eta(2 * kk), et.eta(2 * kk - 1), params));
  s.b = boundary_vector(sp.k, params);
  auto a = adjoint_boundary_vector(sp.j, params);
  s.row_u = conj_row(a.u);
  s.row_v = conj_row(a.v);
  return s;
}

// g(z) = a-row(z) Phi(z) b(z) and g'(z), by 2x2 products at the point z.
std::pair<cplx, cplx> secular_value(const SecularSetup& s, cplx z) {
  cplx u = s.b.u.evaluate(z), v = s.b.v.evaluate(z);
  cplx du = s.b.u.derivative().evaluate(z), dv = s.b.v.derivative().evaluate(z);
  for (const auto& t : s.steps) {
    cplx a = t.a.evaluate(z), b = t.b.evaluate(z), c = t.c.evaluate(z), d = t.d.evaluate(z);
    cplx da = t.a.derivative().evaluate(z), db = t.b.derivative().evaluate(z);
    cplx dc = t.c.derivative().evaluate(z), dd = t.d.derivative().evaluate(z);
    cplx nu = a * u + b * v, nv = c * u + d * v;
    cplx ndu = da * u + db * v + a * du + b * dv, ndv = dc * u + dd * v + c * du + d * dv;
    u = nu, v = nv, du = ndu, dv = ndv;
  }
  cplx ru = s.row_u.evaluate(z), rv = s.row_v.evaluate(z);
  cplx g = ru * u + rv * v;
  cplx dg = s.row_u.derivative().evaluate(z) * u + s.row_v.derivative().evaluate(z) * v + ru * du + rv * dv;
  return {g, dg};
}

}  // namespace

SecularPolynomial secular_polynomial(const PhaseField& phases, const Coefficients& params, std::int64_t M,
                                     std::int64_t N) {
  SecularSetup s = secular_setup(phases, params, M, N);
  auto& sp = s.sp;
  using L = LaurentPoly<cplx>;
  LaurentMat2<cplx> phi{L::constant(1.0), L{}, L{}, L::constant(1.0)};
  for (const auto& t : s.steps) phi = t * phi;
  auto v = phi * s.b;
  L p = s.row_u * v.u + s.row_v * v.v;
  sp.poly = trim_relative(p.shifted(sp.n0 - sp.m0 + 2 - sp.k - sp.j), 1e-14);
  sp.expected_degree = 2 * (sp.n0 - sp.m0) + 2 - (sp.k + sp.j);
  if (sp.poly.is_zero()) throw NumericError("secular polynomial vanished identically");
  sp.growth_rate = std::log(std::abs(sp.poly.leading())) / (0.5 * static_cast<double>(N - M));
  return sp;
}

SecularResult secular_roots(const PhaseField& phases, const Coefficients& params, std::int64_t M, std::int64_t N) {
  SecularResult res;
  res.polynomial = secular_polynomial(phases, params, M, N);
  const auto& poly = res.polynomial.poly;
  if (poly.low() != 0)
    throw NumericError("secular polynomial has lowest power " + std::to_string(poly.low()) + ", expected 0");
  res.roots = polynomial_roots(poly.coefficients());
  // The coefficient list loses accuracy as N - M grows; Newton steps on the
  // cocycle evaluated at the root do not.
  SecularSetup s = secular_setup(phases, params, M, N);
  for (auto& z : res.roots) {
    auto [g, dg] = secular_value(s, z);
    for (int it = 0; it < 8 && dg != 0.0; ++it) {
      cplx next = z - g / dg;
      auto [g2, dg2] = secular_value(s, next);
      if (!(std::abs(g2) < std::abs(g))) break;
      z = next, g = g2, dg = dg2;
    }
  }
  for (std::size_t i = 0; i < res.roots.size(); ++i) {
    const cplx z = res.roots[i];
    res.max_off_circle = std::max(res.max_off_circle, std::abs(std::abs(z) - 1.0));
    if (std::abs(z + 1.0) < 1e-3) res.near_minus_one.push_back(i);
  }
  if (res.max_off_circle > 1e-6)
    throw NumericError("secular root off the unit circle by " + std::to_string(res.max_off_circle));
  res.measure = SpectralMeasure::from_eigenvalues(res.roots, 1e-6);
  return res;
}

// ---------------------------------------------------------------- DOS moments

MomentEstimate dos_moments(const PhaseModel& model, const Coefficients& params, int s_max, int n_realizations,
                           std::uint64_t seed, unsigned threads) {
  if (s_max < 1) throw UsageError("dos_moments needs s_max >= 1");
  if (n_realizations < 1) throw UsageError("dos_moments needs at least one realization");
  const std::int64_t h = 2 * s_max + 4;
  const Window w{-h, h + 2};
  auto samples = ordered_map(static_cast<std::size_t>(n_realizations), threads, [&](std::size_t i) {
    PhaseField f = PhaseField::materialize(PhaseSource(model, rng::derive(seed, i)), Window{w.lo - 1, w.hi + 1});
    BandUnitary u = build_u(params, f, w);
    const auto n = static_cast<std::size_t>(w.size());
    const auto i0 = static_cast<std::size_t>(-w.lo);
    std::vector<cplx> v0(n, 0.0), v1(n, 0.0), out(static_cast<std::size_t>(s_max) + 1);
    v0[i0] = 1.0;
    v1[i0 + 1] = 1.0;
    out[0] = 1.0;
    for (int s = 1; s <= s_max; ++s) {
      v0 = u.apply(v0);
      v1 = u.apply(v1);
      out[static_cast<std::size_t>(s)] = 0.5 * (v0[i0] + v1[i0 + 1]);
    }
    return out;
  });
  MomentEstimate est;
  est.m.assign(static_cast<std::size_t>(s_max) + 1, 0.0);
  est.stderr_.assign(static_cast<std::size_t>(s_max) + 1, 0.0);
  const double n = static_cast<double>(n_realizations);
  for (const auto& smp : samples)
    for (std::size_t s = 0; s < smp.size(); ++s) est.m[s] += smp[s] / n;
  if (n_realizations > 1) {
    for (std::size_t s = 0; s < est.m.size(); ++s) {
      double var = 0.0;
      for (const auto& smp : samples) var += std::norm(smp[s] - est.m[s]);
      est.stderr_[s] = std::sqrt(var / (n - 1.0) / n);
    }
  }
  est.m[0] = 1.0;
  est.stderr_[0] = 0.0;
  return est;
}

// ------------------------------------------------------------- free-case forms

FreeDos free_dos(double lam, const Coefficients& params) {
  const double t = params.t(), t2 = t * t;
  const double edge = params.band_edge();
  lam = wrap_phase(lam);
  FreeDos out;
  if (lam < -edge) return out;
  if (lam > edge) {
    out.integrated = 1.0;
    return out;
  }
  // With u = (r^2 - cos lam) / t^2: 1 + u = 2 sin^2(lam/2) / t^2 and
  // 1 - u = (cos lam - cos edge) / t^2, both free of cancellation.
  const double s = std::sin(0.5 * lam);
  const double one_plus = 2.0 * s * s / t2;
  const double one_minus = std::max(-2.0 * std::sin(0.5 * (lam + edge)) * std::sin(0.5 * (lam - edge)) / t2, 0.0);
  const double acos_u = 2.0 * std::atan2(std::sqrt(one_minus), std::sqrt(one_plus));
  if (std::abs(lam) < edge)
    out.density = std::sqrt(2.0) * std::abs(std::cos(0.5 * lam)) / (kTwoPi * t * std::sqrt(one_minus));
  out.integrated = lam <= 0.0 ? acos_u / kTwoPi : 1.0 - acos_u / kTwoPi;
  return out;
}

BandFunctions band_functions(double x, const Coefficients& params) {
  const double r = params.r(), t = params.t();
  BandFunctions b;
  b.alpha = std::acos(std::clamp(r * r - t * t * std::cos(2.0 * x), -1.0, 1.0));
  b.lambda_plus = unit(b.alpha);
  b.lambda_minus = unit(-b.alpha);
  b.symbol.a = r * r - t * t * unit(2.0 * x);
  b.symbol.b = 2.0 * I * t * r * std::cos(x);
  b.symbol.c = b.symbol.b;
  b.symbol.d = r * r - t * t * unit(-2.0 * x);
  return b;
}

double free_expectation(const std::function<double(cplx)>& f, const Coefficients& params, std::vector<double> breaks) {
  const double a = -0.5 * kPi, b = 0.5 * kPi;
  std::vector<double> pts{a};
  std::sort(breaks.begin(), breaks.end());
  for (double x : breaks)
    if (x > pts.back() + 1e-12 && x < b - 1e-12) pts.push_back(x);
  pts.push_back(b);
  auto g = [&](double x) {
    double al = band_functions(x, params).alpha;
    return f(unit(al)) + f(unit(-al));
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += integrator.integrate(g, pts[i], pts[i + 1], 1e-10);
  return total / kTwoPi;
}

double free_moment(int s, const Coefficients& params) {
  if (s == 0) return 1.0;
  return free_expectation([s](cplx z) { return std::pow(z, s).real(); }, params);
}

ArcSet free_spectrum_arc(const Coefficients& params) { return ArcSet::symmetric(params.band_edge()); }

ArcSet predicted_support(const DistributionSpec& mu, const Coefficients& params) {
  return free_spectrum_arc(params).rotated_by(mu.support());
}

ArcSet predicted_support(const PhaseModel& model, const Coefficients& params) {
  auto mu = model.eta_marginal();
  if (!mu) throw UsageError("predicted_support: eta marginal not available for " + model.describe());
  return predicted_support(*mu, params);
}

SupportReport support_check(const SpectralMeasure& measure, const ArcSet& arcs, double tol, int bins) {
  SupportReport rep;
  rep.count = measure.size();
  rep.max_signed_distance = -kPi;
  double outside_mass = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    double d = arcs.signed_distance(measure.phases()[i]);
    rep.max_signed_distance = std::max(rep.max_signed_distance, d);
    if (d > tol) {
      ++rep.outliers;
      outside_mass += measure.weights()[i];
    }
  }
  rep.outlier_fraction = measure.empty() ? 0.0 : outside_mass / measure.total_mass();
  auto hist = measure.histogram(bins);
  const double width = kTwoPi / bins;
  std::size_t inside = 0, filled = 0;
  for (int b = 0; b < bins; ++b) {
    double lo = -kPi + b * width, hi = lo + width;
    bool in = arcs.is_full() || (arcs.contains(lo) && arcs.contains(hi) && arcs.contains(0.5 * (lo + hi)));
    if (!in) continue;
    ++inside;
    if (hist[static_cast<std::size_t>(b)] > 0.0) ++filled;
  }
  rep.bin_coverage = inside == 0 ? 0.0 : static_cast<double>(filled) / static_cast<double>(inside);
  // Share of the arc length within tol of an eigenphase, sampled on a fine grid.
  const auto& ph = measure.phases();
  auto near = [&](double x) {
    if (ph.empty()) return false;
    auto it = std::lower_bound(ph.begin(), ph.end(), x);
    double d = kPi;
    if (it != ph.end()) d = std::min(d, circle_distance(*it, x));
    if (it != ph.begin()) d = std::min(d, circle_distance(*std::prev(it), x));
    d = std::min({d, circle_distance(ph.front(), x), circle_distance(ph.back(), x)});
    return d <= tol;
  };
  const int samples = 20000;
  std::size_t in_arc = 0, covered = 0;
  for (int i = 0; i < samples; ++i) {
    double x = -kPi + kTwoPi * (i + 0.5) / samples;
    if (!arcs.contains(x)) continue;
    ++in_arc;
    if (near(x)) ++covered;
  }
  rep.coverage = in_arc == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(in_arc);
  return rep;
}

SpectralMeasure pooled_eigenphases(const PhaseModel& model, const Coefficients& params, const PoolBudget& budget) {
  if (budget.n_realizations < 1) throw UsageError("pooled_eigenphases needs at least one realization");
  const std::int64_t M = budget.M, N = budget.M + budget.size;
  auto parts = ordered_map(static_cast<std::size_t>(budget.n_realizations), budget.threads, [&](std::size_t i) {
    PhaseField f = PhaseField::materialize(PhaseSource(model, rng::derive(budget.seed, i)), Window{M - 1, N + 3});
    return eigenphases(truncate(params, f, M, N));
  });
  return SpectralMeasure::pooled(parts);
}

}  // namespace unidos
