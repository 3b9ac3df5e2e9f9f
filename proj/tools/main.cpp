// unidos: experiment runner for random five-diagonal unitary matrices.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "unidos/combinatorics.hpp"
#include "unidos/io.hpp"
#include "unidos/selftest.hpp"
#include "unidos/spectrum.hpp"
#include "unidos/thouless.hpp"
#include "unidos/transfer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace unidos;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitSelftest = 4;

struct Options {
  double r = std::sqrt(0.5);
  std::uint64_t seed = 7;
  unsigned threads = 0;
  std::string out_dir;
  std::string phases = "uniform";
  bool uniform = false, free = false;
  std::int64_t size = 500;
  int realizations = 100;
  int bins = 256;
  int moments = 8;
  std::int64_t steps = 100000;
  int cocycle_realizations = 32;
  std::string grid = "circle:8";
  double tol = 0.05;
  int n = 8;
  bool exact = false;
  double A = 1.0, B = 1.0;
};

PhaseModel parse_phases(const Options& o) {
  if (o.free) return PhaseModel::free();
  if (o.uniform) return PhaseModel::uniform();
  std::vector<std::string> parts;
  std::stringstream ss(o.phases);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.empty()) throw ConfigError("empty phase spec");
  auto num = [&](std::size_t i) {
    if (i >= parts.size()) throw ConfigError("phase spec '" + o.phases + "' is missing a parameter");
    try {
      return std::stod(parts[i]);
    } catch (const std::exception&) {
      throw ConfigError("bad number in phase spec '" + o.phases + "'");
    }
  };
  const std::string& kind = parts[0];
  if (kind == "uniform") return PhaseModel::uniform();
  if (kind == "free") return PhaseModel::free();
  if (kind == "iid-uniform") return PhaseModel::iid(DistributionSpec::uniform());
  if (kind == "arc") return PhaseModel::iid(DistributionSpec::arc(parts.size() > 2 ? num(2) : 0.0, num(1)));
  if (kind == "point") return PhaseModel::iid(DistributionSpec::point_mass(num(1)));
  if (kind == "fourier") {
    double A = num(1), B = num(2);
    int terms = static_cast<int>(num(3));
    std::vector<cplx> c;
    for (int n = 1; n <= terms; ++n) c.push_back(A * std::exp(-B * n));
    return PhaseModel::iid(DistributionSpec::fourier_density(A, B, c));
  }
  throw ConfigError("unknown phase spec '" + o.phases + "'");
}

std::vector<cplx> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto fail = [&] { return ConfigError("bad grid spec '" + spec + "' (circle:K, ring:R:K or list:l1,l2,...)"); };
  try {
    std::vector<cplx> z;
    if (parts.size() == 2 && parts[0] == "circle") {
      int k = std::stoi(parts[1]);
      if (k < 1) throw fail();
      for (int j = 0; j < k; ++j) z.push_back(unit(-kPi + kTwoPi * (j + 0.5) / k));
      return z;
    }
    if (parts.size() == 3 && parts[0] == "ring") {
      double rad = std::stod(parts[1]);
      int k = std::stoi(parts[2]);
      if (k < 1 || !(rad > 0.0)) throw fail();
      for (int j = 0; j < k; ++j) z.push_back(std::polar(rad, -kPi + kTwoPi * (j + 0.5) / k));
      return z;
    }
    if (parts.size() == 2 && parts[0] == "list") {
      std::stringstream ls(parts[1]);
      for (std::string item; std::getline(ls, item, ',');) z.push_back(unit(std::stod(item)));
      if (z.empty()) throw fail();
      return z;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw fail();
  }
  throw fail();
}

struct Run {
  std::string command;
  Options opt;
  fs::path dir;
  json summary;
  std::vector<std::string> outputs;

  std::ofstream open(const std::string& name) {
    outputs.push_back(name);
    std::ofstream f(dir / name);
    if (!f) throw ConfigError("cannot write " + (dir / name).string());
    return f;
  }
};

void cmd_dos(Run& run) {
  const auto& o = run.opt;
  Coefficients p = Coefficients::from_r(o.r);
  PhaseModel model = parse_phases(o);
  PoolBudget pool{o.size, 0, o.realizations, o.seed, o.threads};
  SpectralMeasure dk = pooled_eigenphases(model, p, pool);
  {
    auto f = run.open("dos_histogram.csv");
    io::write_histogram_csv(f, dk, o.bins, "density of states of pooled truncations; flat when phases are uniform");
  }
  {
    auto f = run.open("dos_phases.csv");
    io::write_measure_csv(f, dk, "pooled eigenphase counting measure");
  }
  auto hist = dk.histogram(o.bins);
  double flat = 0.0;
  for (double h : hist) flat = std::max(flat, std::abs(h * o.bins - 1.0));
  auto mom = dos_moments(model, p, o.moments, o.realizations, o.seed, o.threads);
  json moments = json::array();
  for (int s = 1; s <= o.moments; ++s)
    moments.push_back({{"s", s},
                       {"re", mom.m[static_cast<std::size_t>(s)].real()},
                       {"im", mom.m[static_cast<std::size_t>(s)].imag()},
                       {"stderr", mom.stderr_[static_cast<std::size_t>(s)]}});
  run.summary = io::to_json(dk, o.moments, o.bins);
  run.summary["max_relative_bin_deviation"] = flat;
  run.summary["flatness_tolerance"] = 4.0 / std::sqrt(static_cast<double>(dk.size()) / o.bins);
  run.summary["moment_route"] = moments;
  std::cout << "pool " << dk.size() << "  KS to uniform " << run.summary["ks_to_uniform"].get<double>()
            << "  max bin deviation " << flat << '\n';
}

void cmd_lyapunov(Run& run) {
  const auto& o = run.opt;
  Coefficients p = Coefficients::from_r(o.r);
  PhaseModel model = parse_phases(o);
  LyapunovBudget b{o.steps, o.cocycle_realizations, o.seed, MatrixNorm::operator2, o.threads};
  auto f = run.open("lyapunov.csv");
  io::write_claim(f, "Lyapunov exponent per transfer step; ln(1/t^2) for uniform phases, acosh form when free");
  f << "z_re,z_im,gamma,stderr,gamma_free\n" << std::setprecision(17);
  json rows = json::array();
  for (cplx z : parse_grid(o.grid)) {
    auto est = lyapunov_estimate(SpectralParameter(z), model, p, b);
    double g0 = lyapunov_free(SpectralParameter(z), p);
    f << z.real() << ',' << z.imag() << ',' << est.gamma << ',' << est.stderr_ << ',' << g0 << '\n';
    rows.push_back({{"z", {z.real(), z.imag()}}, {"gamma", est.gamma}, {"stderr", est.stderr_}});
    std::cout << "|z| " << std::abs(z) << " arg " << std::arg(z) << "  gamma " << est.gamma << " +- " << est.stderr_
              << '\n';
  }
  run.summary["points"] = rows;
  run.summary["ln_inv_t2"] = -2.0 * std::log(p.t());
}

void cmd_thouless(Run& run) {
  const auto& o = run.opt;
  Coefficients p = Coefficients::from_r(o.r);
  PhaseModel model = parse_phases(o);
  ThoulessBudget b;
  b.lyapunov = {o.steps, model.is_deterministic() ? 1 : o.cocycle_realizations, o.seed, MatrixNorm::operator2,
                o.threads};
  b.pool = {o.size, 0, model.is_deterministic() ? 1 : o.realizations, o.seed + 1, o.threads};
  auto grid = parse_grid(o.grid);
  auto rep = thouless_scan(grid, model, p, b);
  auto f = run.open("thouless.csv");
  io::write_thouless_csv(f, rep, "cocycle exponent against the log-potential of the density of states");
  run.summary = io::to_json(rep);
  std::cout << "max gap " << rep.max_abs_gap << '\n';
}

void cmd_free_exact(Run& run) {
  const auto& o = run.opt;
  Coefficients p = Coefficients::from_r(o.r);
  auto zero = PhaseField::from_eta(-1, std::vector<double>(static_cast<std::size_t>(o.size + 4), 0.0));
  SpectralMeasure dk = eigenphases(truncate(p, zero, 0, o.size));
  auto f = run.open("free_exact.csv");
  io::write_claim(f, "free integrated density, density and Lyapunov exponent in closed form");
  f << "lambda,N_empirical,N0,dk0_density,gamma0\n" << std::setprecision(17);
  const int pts = 512;
  for (int i = 0; i < pts; ++i) {
    double lam = -kPi + kTwoPi * (i + 0.5) / pts;
    auto fd = free_dos(lam, p);
    f << lam << ',' << dk.integrated(lam) << ',' << fd.integrated << ',' << fd.density << ','
      << lyapunov_free(SpectralParameter::on_circle(lam), p) << '\n';
  }
  double ks = dk.ks_distance([&](double x) { return free_dos(x, p).integrated; });
  run.summary["ks_to_N0"] = ks;
  run.summary["band_edge"] = p.band_edge();
  std::cout << "sup |N - N0| = " << ks << '\n';
}

void cmd_paths(Run& run) {
  const auto& o = run.opt;
  Coefficients p = o.exact ? Coefficients::balanced() : Coefficients::from_r(o.r);
  if (o.n < 1 || o.n > 12) throw ConfigError("--n must lie in 1..12");
  auto table = path_sum_table_bruteforce(o.n, p);
  auto [pp, pm] = gen_poly(o.n, p);
  auto f = run.open("paths.csv");
  io::write_claim(f, "weighted path sums S_{n-1}(j) by enumeration, generating polynomial and binomial formula");
  f << "n,j,S_bruteforce,S_genpoly" << (o.exact ? ",S_exact" : "") << '\n' << std::setprecision(17);
  double worst = 0.0;
  bool exact_ok = true;
  for (const auto& [j, s] : table) {
    double g = (j % 2 == 0) ? pp[j] : pm[j];
    worst = std::max(worst, std::abs(g - s));
    f << o.n << ',' << j << ',' << s << ',' << g;
    if (o.exact) {
      auto ex = s_exact_balanced(o.n, j);
      auto [qp, qm] = gen_poly(o.n, balanced_weights());
      exact_ok = exact_ok && ((j % 2 == 0) ? qp[j] : qm[j]) == ex.value;
      f << ',' << ex.value.str();
    }
    f << '\n';
  }
  run.summary["max_abs_gap"] = worst;
  if (o.exact) run.summary["exact_match"] = exact_ok;
  std::cout << "max |bruteforce - genpoly| = " << worst << (o.exact ? (exact_ok ? "  exact: match" : "  exact: MISMATCH") : "")
            << '\n';
}

void cmd_support(Run& run) {
  const auto& o = run.opt;
  Coefficients p = Coefficients::from_r(o.r);
  PhaseModel model = parse_phases(o);
  ArcSet arcs = predicted_support(model, p);
  SpectralMeasure dk = pooled_eigenphases(model, p, PoolBudget{o.size, 0, o.realizations, o.seed, o.threads});
  auto rep = support_check(dk, arcs, o.tol, o.bins);
  {
    auto f = run.open("support_histogram.csv");
    io::write_histogram_csv(f, dk, o.bins, "spectrum equals the free band rotated by the phase support");
  }
  run.summary = io::to_json(rep);
  json a = json::array();
  for (const auto& arc : arcs.arcs()) a.push_back({arc.lo, arc.hi});
  run.summary["predicted_arcs"] = a;
  std::cout << "outlier fraction " << rep.outlier_fraction << "  coverage " << rep.coverage << '\n';
}

void cmd_analyticity(Run& run) {
  const auto& o = run.opt;
  Coefficients p = Coefficients::from_r(o.r);
  auto v = analyticity_margin(o.A, o.B, p);
  run.summary = {{"margin", v.margin}, {"analytic", v.analytic}, {"all_r", v.all_r}};
  if (v.r_minus) run.summary["r_minus"] = *v.r_minus;
  if (v.r_plus) run.summary["r_plus"] = *v.r_plus;
  std::cout << "margin " << v.margin << (v.analytic ? "  analytic" : "  not certified") << '\n';
}

int cmd_selftest(Run& run) {
  SelftestOptions so;
  so.threads = run.opt.threads;
  auto results = run_selftest(so);
  bool all = true;
  json rows = json::array();
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(22) << r.name << r.claim << "  [" << r.detail
              << ", " << std::fixed << std::setprecision(2) << r.seconds << " s]\n";
    std::cout.unsetf(std::ios::fixed);
    all = all && r.pass;
    rows.push_back({{"name", r.name}, {"claim", r.claim}, {"pass", r.pass}, {"detail", r.detail}});
  }
  run.summary["checks"] = rows;
  run.summary["all_pass"] = all;
  return all ? 0 : kExitSelftest;
}

json options_json(const Options& o) {
  return {{"r", o.r},         {"seed", o.seed},   {"threads", o.threads},   {"phases", o.phases},
          {"uniform", o.uniform}, {"free", o.free}, {"size", o.size},     {"realizations", o.realizations},
          {"bins", o.bins},   {"moments", o.moments}, {"steps", o.steps}, {"cocycle_realizations", o.cocycle_realizations},
          {"grid", o.grid},   {"tol", o.tol},     {"n", o.n},               {"exact", o.exact},
          {"A", o.A},         {"B", o.B}};
}

// JSON config {"command": ..., "<flag>": value, ...} turned into argv tokens.
std::vector<std::string> config_tokens(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object() || !cfg.contains("command") || !cfg["command"].is_string())
    throw ConfigError("config needs a string field 'command'");
  std::vector<std::string> tokens{cfg["command"].get<std::string>()};
  for (const auto& [key, val] : cfg.items()) {
    if (key == "command") continue;
    if (val.is_boolean()) {
      if (val.get<bool>()) tokens.push_back("--" + key);
    } else if (val.is_string()) {
      tokens.push_back("--" + key);
      tokens.push_back(val.get<std::string>());
    } else if (val.is_number()) {
      tokens.push_back("--" + key);
      tokens.push_back(val.dump());
    } else {
      throw ConfigError("config field '" + key + "' must be a scalar");
    }
  }
  return tokens;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random five-diagonal unitary matrices: density of states, Lyapunov exponents, path sums"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  Options o;
  const char* env_out = std::getenv("UNIDOS_OUT_DIR");
  o.out_dir = env_out ? env_out : ".";
  std::string config;
  app.add_option("--config", config, "JSON file mirroring the flags, with a 'command' field");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--r", o.r, "reflexion coefficient; t = sqrt(1 - r^2)")->capture_default_str();
    sub->add_option("--seed", o.seed)->capture_default_str();
    sub->add_option("--threads", o.threads, "worker count, 0 = all cores")->capture_default_str();
    sub->add_option("--out", o.out_dir, "output directory (default $UNIDOS_OUT_DIR or .)");
  };
  auto phases = [&](CLI::App* sub) {
    sub->add_option("--phases", o.phases, "uniform | free | iid-uniform | arc:H[:C] | point:C | fourier:A:B:terms")
        ->capture_default_str();
    sub->add_flag("--uniform", o.uniform, "uniform coupled phases");
    sub->add_flag("--free", o.free, "all phases zero");
  };

  auto* dos = app.add_subcommand("dos", "pooled eigenphase histogram and moment route");
  common(dos);
  phases(dos);
  dos->add_option("--size", o.size)->capture_default_str();
  dos->add_option("--realizations", o.realizations)->capture_default_str();
  dos->add_option("--bins", o.bins)->capture_default_str();
  dos->add_option("--moments", o.moments)->capture_default_str();

  auto* lyap = app.add_subcommand("lyapunov", "cocycle Lyapunov exponent on a z grid");
  common(lyap);
  phases(lyap);
  lyap->add_option("--grid", o.grid, "circle:K | ring:R:K | list:l1,l2")->capture_default_str();
  lyap->add_option("--steps", o.steps)->capture_default_str();
  lyap->add_option("--realizations", o.cocycle_realizations)->capture_default_str();

  auto* thou = app.add_subcommand("thouless-scan", "cocycle exponent against the Thouless right-hand side");
  common(thou);
  phases(thou);
  thou->add_option("--grid", o.grid)->capture_default_str();
  thou->add_option("--size", o.size, "truncation size for the density of states")->capture_default_str();
  thou->add_option("--realizations", o.realizations, "truncations pooled")->capture_default_str();
  thou->add_option("--steps", o.steps)->capture_default_str();
  thou->add_option("--cocycle-realizations", o.cocycle_realizations)->capture_default_str();

  auto* fx = app.add_subcommand("free-exact", "free truncation against the closed forms");
  common(fx);
  fx->add_option("--size", o.size)->capture_default_str();

  auto* paths = app.add_subcommand("paths", "path sums by enumeration and generating polynomial");
  common(paths);
  paths->add_option("--n", o.n)->capture_default_str();
  paths->add_flag("--exact", o.exact, "balanced case r = t with exact rationals");

  auto* sup = app.add_subcommand("support-check", "pooled eigenphases against the predicted spectrum");
  common(sup);
  phases(sup);
  sup->add_option("--size", o.size)->capture_default_str();
  sup->add_option("--realizations", o.realizations)->capture_default_str();
  sup->add_option("--tol", o.tol)->capture_default_str();
  sup->add_option("--bins", o.bins)->capture_default_str();

  auto* ana = app.add_subcommand("analyticity", "analyticity margin of the density of states");
  common(ana);
  ana->add_option("--A", o.A)->capture_default_str();
  ana->add_option("--B", o.B)->capture_default_str();

  auto* self = app.add_subcommand("selftest", "fast subset of the acceptance checks");
  common(self);

  try {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    auto cfg = std::find(args.begin(), args.end(), "--config");
    if (cfg != args.end()) {
      if (cfg + 1 == args.end()) throw ConfigError("--config needs a file");
      auto tokens = config_tokens(*(cfg + 1));
      args.erase(cfg, cfg + 2);
      // Command-line flags after the config override it.
      if (!args.empty() && args.front() == tokens.front()) args.erase(args.begin());
      tokens.insert(tokens.end(), args.begin(), args.end());
      args = tokens;
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  Run run;
  run.opt = o;
  run.command = app.get_subcommands().front()->get_name();
  run.dir = o.out_dir;
  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    fs::create_directories(run.dir);
    if (run.command == "dos") cmd_dos(run);
    if (run.command == "lyapunov") cmd_lyapunov(run);
    if (run.command == "thouless-scan") cmd_thouless(run);
    if (run.command == "free-exact") cmd_free_exact(run);
    if (run.command == "paths") cmd_paths(run);
    if (run.command == "support-check") cmd_support(run);
    if (run.command == "analyticity") cmd_analyticity(run);
    if (run.command == "selftest") code = cmd_selftest(run);
  } catch (const NumericError& e) {
    std::cerr << run.command << ": numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << run.command << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << run.command << ": " << e.what() << '\n';
    return kExitConfig;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  {
    auto f = run.open(run.command + "_summary.json");
    f << std::setw(2) << run.summary << '\n';
  }
  std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  json manifest{{"command", run.command},
                {"config", options_json(o)},
                {"seed", o.seed},
                {"version", UNIDOS_VERSION},
                {"wall_time_s", wall},
                {"finished_at", stamp},
                {"outputs", run.outputs}};
  std::ofstream(run.dir / "manifest.json") << std::setw(2) << manifest << '\n';
  return code;
}
