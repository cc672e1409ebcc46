#include "lmg/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "lmg/error.hpp"

namespace lmg {

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw InvalidParameter("format must be csv or json, got '" + text + "'");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  const std::string s = format_number(x);
  double y = 0;
  std::from_chars(s.data(), s.data() + s.size(), y);
  return y;
}

namespace {

Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return v.dump();
}

}  // namespace

void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
    os << '\n';
  }
}

Json to_json(const Table& table) {
  Json out = Json::array();
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t c = 0; c < table.columns.size() && c < row.size(); ++c)
      obj[table.columns[c]] = row[c];
    out.push_back(std::move(obj));
  }
  return out;
}

void write(std::ostream& os, const Table& table, Format format) {
  if (format == Format::Csv)
    write_csv(os, table);
  else
    os << to_json(table).dump(2) << '\n';
}

Table sweep_table(const std::vector<SweepRecord>& records) {
  Table t{kSweepFields, {}};
  for (const SweepRecord& r : records) {
    if (!r.ok()) {
      std::vector<Json> row(kSweepFields.size(), nullptr);
      row.front() = r.n_spins;
      row[1] = number(r.gamma_over_j);
      row.back() = r.regime;
      t.rows.push_back(std::move(row));
      continue;
    }
    t.rows.push_back({r.n_spins, number(r.gamma_over_j), number(r.delta_e_ratio),
                      number(r.g_loc), number(r.g_01), number(r.j01), optional_number(r.eta_mf),
                      optional_number(r.eta_exact), optional_number(r.eta_quantum),
                      number(r.gap_ratio), number(r.secular_param), number(r.leakage_0),
                      number(r.leakage_1), r.regime});
  }
  return t;
}

Table trace_table(const CoherenceTrace& trace) {
  Table t{{"t", "re_rho01", "im_rho01", "re_rho_pr", "im_rho_pr", "pop_diff_eigen",
           "pop_diff_pointer"},
          {}};
  for (std::size_t k = 0; k < trace.size(); ++k)
    t.rows.push_back({number(trace.times[k]), number(trace.rho01[k].real()),
                      number(trace.rho01[k].imag()), number(trace.rho_pr[k].real()),
                      number(trace.rho_pr[k].imag()), number(trace.pop_diff_eigen[k]),
                      number(trace.pop_diff_pointer[k])});
  return t;
}

Table normalized_rates_table(const std::vector<NormalizedRates>& rates) {
  Table t{{"n_spins", "local", "pointer", "eigen"}, {}};
  for (const auto& r : rates)
    t.rows.push_back({r.n_spins, number(r.local), number(r.pointer), number(r.eigen)});
  return t;
}

Table asymptote_table(const AsymptoteFit& fit) {
  Table t{{"n_spins", "c"}, {}};
  for (const auto& [n, c] : fit.c_at_n) t.rows.push_back({n, number(c)});
  return t;
}

Table spectrum_table(const EigenSystemD& eig, std::size_t count) {
  Table t{{"k", "energy", "parity"}, {}};
  const std::size_t n = std::min<std::size_t>(count, static_cast<std::size_t>(eig.size()));
  for (std::size_t k = 0; k < n; ++k)
    t.rows.push_back({static_cast<long long>(k), number(eig.values[static_cast<Eigen::Index>(k)]),
                      to_string(eig.parities[k])});
  return t;
}

Json factors_json(const ModelParams& params, const GeometricFactors& f) {
  Json j = Json::object();
  j["n_spins"] = params.n_spins;
  j["coupling"] = number(params.coupling);
  j["field"] = number(params.field);
  j["dephasing"] = number(params.dephasing);
  j["order_parameter"] = number(params.order_parameter());
  j["delta_e"] = number(f.delta_e);
  j["g_loc"] = number(f.g_loc);
  j["g_01"] = number(f.g_01);
  j["j01"] = number(f.j01);
  j["leakage_0"] = number(f.leakage_0);
  j["leakage_1"] = number(f.leakage_1);
  j["gap_ratio"] = number(f.gap_ratio);
  j["eta_mf"] = optional_number(f.eta_mf);
  j["eta_exact"] = optional_number(f.eta_exact);
  j["eta_quantum"] = optional_number(f.eta_quantum);
  j["delta_g_total"] = optional_number(f.delta_g_total);
  j["delta_zp"] = optional_number(f.delta_zp);
  j["overlap_s"] = number(f.overlap_s);
  j["instanton_action"] = number(f.instanton_action);
  if (params.dephasing > 0.0 && f.g_01 > 0.0)
    j["secular_param"] = number(secular_parameter(f, params.dephasing));
  else
    j["secular_param"] = nullptr;
  const auto warnings = params.warnings();
  if (!warnings.empty()) j["warnings"] = warnings;
  return j;
}

Json roots_json(const TwoChannelRoots& roots) {
  Json j = Json::object();
  j["lambda_plus"] = {number(roots.lambda_plus.real()), number(roots.lambda_plus.imag())};
  j["lambda_minus"] = {number(roots.lambda_minus.real()), number(roots.lambda_minus.imag())};
  j["regime"] = to_string(roots.regime);
  j["envelope_rate"] = optional_number(roots.envelope_rate);
  return j;
}

Json spectrum_json(const DoubletSpectrum& s) {
  Json j = Json::array();
  for (std::size_t k = 0; k < 4; ++k)
    j.push_back({{"mode", s.modes[k]}, {"eigenvalue", number(s.eigenvalues[k])}});
  return j;
}

}  // namespace lmg
