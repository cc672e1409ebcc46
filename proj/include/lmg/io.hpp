#pragma once

// CSV and JSON emission. Every table is a header plus rows of JSON scalars,
// so both formats come from the same data. Floats are written with 10
// significant digits regardless of the global locale.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "lmg/doublet_theory.hpp"
#include "lmg/lindblad_dynamics.hpp"
#include "lmg/spectral_observables.hpp"
#include "lmg/sweep.hpp"

namespace lmg {

using Json = nlohmann::ordered_json;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

enum class Format { Csv, Json };
Format parse_format(const std::string& text);

/// Shortest form of x at 10 significant digits; "nan", "inf", "-inf" for
/// non-finite values.
std::string format_number(double x);

/// x rounded to 10 significant digits, or null when not finite.
Json number(double x);

void write_csv(std::ostream& os, const Table& table);
Json to_json(const Table& table);  // array of objects keyed by column
void write(std::ostream& os, const Table& table, Format format);

Table sweep_table(const std::vector<SweepRecord>& records);
Table trace_table(const CoherenceTrace& trace);
Table normalized_rates_table(const std::vector<NormalizedRates>& rates);
Table asymptote_table(const AsymptoteFit& fit);
Table spectrum_table(const EigenSystemD& eig, std::size_t count);

Json factors_json(const ModelParams& params, const GeometricFactors& f);
Json roots_json(const TwoChannelRoots& roots);
Json spectrum_json(const DoubletSpectrum& s);

}  // namespace lmg
