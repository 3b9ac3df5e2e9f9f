#include "unidos/io.hpp"

#include <iomanip>
#include <ostream>

namespace unidos::io {

namespace {

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

void write_claim(std::ostream& out, const std::string& claim) { out << "# claim: " << claim << '\n'; }

void write_measure_csv(std::ostream& out, const SpectralMeasure& m, const std::string& claim) {
  write_claim(out, claim);
  out << "phase,weight\n" << std::setprecision(17);
  for (std::size_t i = 0; i < m.size(); ++i) out << m.phases()[i] << ',' << m.weights()[i] << '\n';
}

void write_histogram_csv(std::ostream& out, const SpectralMeasure& m, int bins, const std::string& claim) {
  write_claim(out, claim);
  out << "bin_lo,bin_hi,mass,density\n" << std::setprecision(17);
  auto h = m.histogram(bins);
  const double width = kTwoPi / bins;
  for (int b = 0; b < bins; ++b) {
    double lo = -kPi + b * width;
    out << lo << ',' << lo + width << ',' << h[static_cast<std::size_t>(b)] << ','
        << h[static_cast<std::size_t>(b)] * bins << '\n';
  }
}

void write_thouless_csv(std::ostream& out, const ThoulessReport& rep, const std::string& claim) {
  write_claim(out, claim);
  out << "z_re,z_im,gamma_cocycle,stderr,gamma_thouless,gap\n" << std::setprecision(17);
  for (std::size_t i = 0; i < rep.z.size(); ++i)
    out << rep.z[i].real() << ',' << rep.z[i].imag() << ',' << rep.gamma_cocycle[i] << ',' << rep.stderr_[i] << ','
        << rep.gamma_thouless[i] << ',' << rep.gap[i] << '\n';
}

void write_path_table_csv(std::ostream& out, int n, const std::map<std::int64_t, double>& table,
                          const std::string& claim) {
  write_claim(out, claim);
  out << "n,j,S\n" << std::setprecision(17);
  for (const auto& [j, s] : table) out << n << ',' << j << ',' << s << '\n';
}

json to_json(const SpectralMeasure& m, int n_moments, int bins) {
  json j;
  j["size"] = m.size();
  j["total_mass"] = m.total_mass();
  j["max_modulus_defect"] = m.max_modulus_defect();
  json moments = json::array();
  for (int s = 1; s <= n_moments; ++s) moments.push_back(complex_json(m.moment(s)));
  j["moments"] = moments;
  j["histogram"] = m.histogram(bins);
  j["ks_to_uniform"] = m.ks_distance([](double x) { return (x + kPi) / kTwoPi; });
  return j;
}

json to_json(const ThoulessReport& rep) {
  json j;
  json rows = json::array();
  for (std::size_t i = 0; i < rep.z.size(); ++i)
    rows.push_back({{"z", complex_json(rep.z[i])},
                    {"gamma_cocycle", rep.gamma_cocycle[i]},
                    {"stderr", rep.stderr_[i]},
                    {"gamma_thouless", rep.gamma_thouless[i]},
                    {"gap", rep.gap[i]}});
  j["points"] = rows;
  j["max_abs_gap"] = rep.max_abs_gap;
  return j;
}

json to_json(const SupportReport& rep) {
  return {{"count", rep.count},
          {"outliers", rep.outliers},
          {"outlier_fraction", rep.outlier_fraction},
          {"max_signed_distance", rep.max_signed_distance},
          {"coverage", rep.coverage},
          {"bin_coverage", rep.bin_coverage}};
}

}  // namespace unidos::io
