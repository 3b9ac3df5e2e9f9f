#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "json.hpp"
#include "unidos/spectrum.hpp"
#include "unidos/thouless.hpp"

namespace unidos::io {

using nlohmann::json;

/// "# claim: ..." header line written at the top of every table.
void write_claim(std::ostream& out, const std::string& claim);

/// Rows: phase, weight.
void write_measure_csv(std::ostream& out, const SpectralMeasure& m, const std::string& claim);
/// Rows: bin_lo, bin_hi, mass, density (w.r.t. d lambda / 2 pi).
void write_histogram_csv(std::ostream& out, const SpectralMeasure& m, int bins, const std::string& claim);
/// Rows: z_re, z_im, gamma_cocycle, stderr, gamma_thouless, gap.
void write_thouless_csv(std::ostream& out, const ThoulessReport& rep, const std::string& claim);
/// Rows: n, j, S.
void write_path_table_csv(std::ostream& out, int n, const std::map<std::int64_t, double>& table,
                          const std::string& claim);

json to_json(const SpectralMeasure& m, int n_moments = 8, int bins = 256);
json to_json(const ThoulessReport& rep);
json to_json(const SupportReport& rep);

}  // namespace unidos::io
