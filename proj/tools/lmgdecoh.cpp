// lmgdecoh: spectra, rate factors, sweeps and dephasing dynamics of the LMG
// ground doublet.
//
// Exit status: 0 success, 1 verification or runtime failure, 2 bad arguments.

#include <CLI11.hpp>

#include <algorithm>
#include <clocale>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "lmg/doublet_theory.hpp"
#include "lmg/error.hpp"
#include "lmg/io.hpp"
#include "lmg/lindblad_dynamics.hpp"
#include "lmg/sweep.hpp"
#include "lmg/verify.hpp"

namespace fs = std::filesystem;
using namespace lmg;

namespace {

struct Common {
  int n = kReferenceN;
  double gamma_over_j = kReferenceGammaOverJ;
  std::optional<double> coupling;  // calibrated when absent
  double dephasing = kDefaultDephasing;
  std::string out = "-";
  std::string format = "csv";
  unsigned workers = 0;

  SweepConfig config() const {
    SweepConfig c = coupling ? SweepConfig::with_coupling(*coupling, dephasing)
                             : SweepConfig::calibrated(kReferenceSplitting, dephasing);
    c.workers = workers;
    return c;
  }
  ModelParams params() const {
    const ModelParams p = make_params(n, gamma_over_j, config().coupling, dephasing);
    for (const auto& w : p.warnings()) std::cerr << "warning: " << w << '\n';
    return p;
  }
  Format fmt() const { return parse_format(format); }
};

void add_physics(CLI::App* app, Common& c, bool with_n = true) {
  if (with_n) app->add_option("--n", c.n, "number of spins N")->capture_default_str();
  app->add_option("--gamma-over-j", c.gamma_over_j, "transverse field ratio")->capture_default_str();
  app->add_option("--coupling-rads", c.coupling, "J in rad/s (default: calibrated)");
  app->add_option("--dephasing", c.dephasing, "dephasing rate in 1/s")->capture_default_str();
}

void add_output(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "output file, '-' for stdout")->capture_default_str();
  app->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app->add_option("--workers", c.workers, "worker threads (0: all cores)");
}

template <typename F>
void emit(const std::string& path, F&& body) {
  if (path == "-" || path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw InvalidParameter("cannot open '" + path + "' for writing");
  os.imbue(std::locale::classic());
  body(os);
}

Table key_value_table(const Json& obj) {
  Table t{{"key", "value"}, {}};
  const Json flat = obj.flatten();
  for (const auto& [k, v] : flat.items()) {
    std::string key = k.substr(1);
    std::replace(key.begin(), key.end(), '/', '.');
    t.rows.push_back({key, v});
  }
  return t;
}

void emit_json_or_table(const Common& c, const Json& obj) {
  emit(c.out, [&](std::ostream& os) {
    if (c.fmt() == Format::Json)
      os << obj.dump(2) << '\n';
    else
      write_csv(os, key_value_table(obj));
  });
}

Json rates_json(const ModelParams& p) {
  const EigenSystemD eig = eigh_tridiagonal(build_hamiltonian(p));
  const GeometricFactors f = geometric_factors(p, eig);
  Json j = factors_json(p, f);
  if (p.ordered()) {
    const BogoliubovReport b = bogoliubov_report(p, f);
    j["delta_g_bog"] = number(b.delta_g_bog);
    j["leakage_avg"] = number(b.leakage_avg);
    j["regime"] = to_string(three_regime_label(p, f, p.dephasing));
  }
  return j;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream ss(s);
  ss.imbue(std::locale::classic());
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    is.imbue(std::locale::classic());
    double x = 0;
    if (!(is >> x)) throw InvalidParameter("bad number '" + item + "'");
    out.push_back(x);
  }
  return out;
}

void write_file(const fs::path& path, const Table& t, Format f) {
  std::ofstream os(path);
  if (!os) throw InvalidParameter("cannot open '" + path.string() + "' for writing");
  os.imbue(std::locale::classic());
  write(os, t, f);
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  std::locale::global(std::locale::classic());
  std::cout.imbue(std::locale::classic());

  CLI::App app{"LMG doublet dephasing: spectra, rate factors, sweeps and Lindblad dynamics"};
  app.require_subcommand(1);
  Common c;

  auto* spectrum = app.add_subcommand("spectrum", "lowest eigenvalues with reflection parity");
  std::size_t count = 10;
  add_physics(spectrum, c);
  add_output(spectrum, c);
  spectrum->add_option("--count", count, "number of levels")->capture_default_str();

  auto* rates = app.add_subcommand("rates", "geometric factors and ratios at one point");
  add_physics(rates, c);
  add_output(rates, c);

  auto* sweep_n_cmd = app.add_subcommand("sweep-n", "sweep over N at fixed Gamma/J");
  std::string n_list;
  add_physics(sweep_n_cmd, c, false);
  add_output(sweep_n_cmd, c);
  sweep_n_cmd->add_option("--n-list", n_list, "comma-separated N values (default: table grid)");

  auto* sweep_g_cmd = app.add_subcommand("sweep-gamma", "sweep over Gamma/J at fixed N");
  std::string g_list;
  add_physics(sweep_g_cmd, c);
  add_output(sweep_g_cmd, c);
  sweep_g_cmd->add_option("--gamma-list", g_list, "comma-separated Gamma/J values");

  auto* evolve_cmd = app.add_subcommand("evolve", "integrate the master equation");
  std::optional<double> t_final;
  int samples = 400;
  std::string initial = "pointer";
  int steps_per_period = 40;
  add_physics(evolve_cmd, c);
  add_output(evolve_cmd, c);
  evolve_cmd->add_option("--t-final", t_final, "horizon in s (default: 3/(gamma G_01))");
  evolve_cmd->add_option("--samples", samples, "uniform samples including t = 0")->capture_default_str();
  evolve_cmd->add_option("--initial", initial, "pointer | pointer_r | e<k> | dicke:<i> | mixture:w,u,v")
      ->capture_default_str();
  evolve_cmd->add_option("--steps-per-period", steps_per_period, "RK4 steps per fastest period")
      ->capture_default_str();

  auto* doublet_cmd = app.add_subcommand("doublet", "doublet Liouvillian and two-channel roots");
  add_physics(doublet_cmd, c);
  add_output(doublet_cmd, c);

  auto* calibrate_cmd = app.add_subcommand("calibrate", "J that gives a target splitting");
  double target = kReferenceSplitting;
  add_physics(calibrate_cmd, c);
  add_output(calibrate_cmd, c);
  calibrate_cmd->add_option("--target", target, "splitting in rad/s")->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "run the invariant suite");
  std::string fault = "none";
  VerifyOptions vopt;
  std::string v_n_list;
  add_output(verify_cmd, c);
  verify_cmd->add_option("--dephasing", c.dephasing, "dephasing rate in 1/s")->capture_default_str();
  verify_cmd->add_option("--n-list", v_n_list, "comma-separated N grid");
  verify_cmd->add_option("--inject-fault", fault, "none | jz-sign-flip")
      ->check(CLI::IsMember({"none", "jz-sign-flip"}))
      ->capture_default_str();

  auto* reproduce_cmd = app.add_subcommand("reproduce", "write the benchmark table and sweep data files");
  std::string out_dir = "results";
  add_output(reproduce_cmd, c);
  reproduce_cmd->add_option("--dephasing", c.dephasing, "dephasing rate in 1/s")->capture_default_str();
  reproduce_cmd->add_option("--coupling-rads", c.coupling, "J in rad/s (default: calibrated)");
  reproduce_cmd->add_option("--dir", out_dir, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*spectrum) {
      const ModelParams p = c.params();
      const EigenSystemD eig = eigh_tridiagonal(build_hamiltonian(p));
      emit(c.out, [&](std::ostream& os) { write(os, spectrum_table(eig, count), c.fmt()); });
    } else if (*rates) {
      emit_json_or_table(c, rates_json(c.params()));
    } else if (*sweep_n_cmd) {
      const auto ns = n_list.empty() ? kTableGrid : parse_int_list(n_list);
      const auto recs = sweep_n(c.gamma_over_j, ns, c.config());
      emit(c.out, [&](std::ostream& os) { write(os, sweep_table(recs), c.fmt()); });
      for (const auto& r : recs)
        if (!r.ok()) std::cerr << "N=" << r.n_spins << " failed: " << r.error << '\n';
    } else if (*sweep_g_cmd) {
      const auto gs = g_list.empty() ? kFieldGrid : parse_double_list(g_list);
      const auto recs = sweep_gamma(c.n, gs, c.config());
      emit(c.out, [&](std::ostream& os) { write(os, sweep_table(recs), c.fmt()); });
      for (const auto& r : recs)
        if (!r.ok()) std::cerr << "Gamma/J=" << r.gamma_over_j << " failed: " << r.error << '\n';
    } else if (*evolve_cmd) {
      const ModelParams p = c.params();
      const EigenSystemD eig = eigh_tridiagonal(build_hamiltonian(p));
      const GeometricFactors f = geometric_factors(p, eig);
      double horizon = 0;
      if (t_final) {
        horizon = *t_final;
      } else {
        if (!(p.dephasing > 0.0)) throw InvalidParameter("--t-final is required when dephasing is 0");
        horizon = 3.0 / (p.dephasing * f.g_01);
      }
      EvolveOptions eo;
      eo.steps_per_period = steps_per_period;
      const auto rho0 = initial_state(parse_initial_state(initial), eig);
      const CoherenceTrace tr = evolve(p, eig, rho0, horizon, samples, eo);
      std::cerr << "step " << format_number(tr.step) << " s, local error estimate "
                << format_number(tr.local_error_estimate) << ", max trace error "
                << format_number(tr.max_trace_error) << '\n';
      emit(c.out, [&](std::ostream& os) {
        if (c.fmt() == Format::Json) {
          Json j = Json::object();
          j["step"] = number(tr.step);
          j["local_error_estimate"] = number(tr.local_error_estimate);
          j["max_trace_error"] = number(tr.max_trace_error);
          j["max_hermiticity"] = number(tr.max_hermiticity);
          j["min_population"] = number(tr.min_population);
          j["trace"] = to_json(trace_table(tr));
          os << j.dump(2) << '\n';
        } else {
          write_csv(os, trace_table(tr));
        }
      });
    } else if (*doublet_cmd) {
      const ModelParams p = c.params();
      const GeometricFactors f = geometric_factors(p);
      Json j = Json::object();
      j["j01"] = number(f.j01);
      j["delta_e"] = number(f.delta_e);
      j["g_loc"] = number(f.g_loc);
      j["spectrum"] = spectrum_json(doublet_spectrum(f.j01, p.dephasing));
      j["two_channel"] = roots_json(two_channel_roots(p.dephasing, f.g_loc, f.delta_e));
      emit_json_or_table(c, j);
    } else if (*calibrate_cmd) {
      const double j = calibrate_coupling(target, c.n, c.gamma_over_j);
      Json out = Json::object();
      out["target_delta_e"] = number(target);
      out["n_ref"] = c.n;
      out["gamma_over_j_ref"] = number(c.gamma_over_j);
      out["coupling_rads"] = number(j);
      emit_json_or_table(c, out);
    } else if (*verify_cmd) {
      vopt.dephasing = c.dephasing;
      vopt.workers = c.workers;
      if (!v_n_list.empty()) vopt.n_grid = parse_int_list(v_n_list);
      if (fault == "jz-sign-flip") vopt.fault = Fault::JzSignFlip;
      const VerifyReport rep = run_verification(vopt);
      emit(c.out, [&](std::ostream& os) {
        if (c.fmt() == Format::Json) {
          os << report_json(rep).dump(2) << '\n';
        } else {
          Table t{{"name", "n_spins", "gamma_over_j", "value", "bound", "passed"}, {}};
          for (const auto& ck : rep.checks)
            t.rows.push_back({ck.name, ck.n_spins, number(ck.gamma_over_j), number(ck.value),
                              number(ck.bound), ck.passed});
          write_csv(os, t);
        }
      });
      std::cerr << rep.checks.size() - rep.failures() << "/" << rep.checks.size()
                << " checks passed\n";
      return rep.passed() ? 0 : 1;
    } else if (*reproduce_cmd) {
      const SweepConfig cfg = c.config();
      const Format f = c.fmt();
      const std::string ext = f == Format::Csv ? ".csv" : ".json";
      fs::create_directories(out_dir);
      const fs::path dir(out_dir);
      const auto table = sweep_n(kReferenceGammaOverJ, kTableGrid, cfg);
      write_file(dir / ("benchmark_table" + ext), sweep_table(table), f);
      write_file(dir / ("eta_vs_n" + ext),
                 sweep_table(sweep_n(kReferenceGammaOverJ, kRatioGrid, cfg)), f);
      write_file(dir / ("eta_vs_field" + ext),
                 sweep_table(sweep_gamma(kReferenceN, kFieldGrid, cfg)), f);
      write_file(dir / ("rate_factors" + ext),
                 normalized_rates_table(normalized_rates(kRateFactorGrid, kReferenceGammaOverJ, cfg)), f);
      std::vector<SweepRecord> large;
      std::copy_if(table.begin(), table.end(), std::back_inserter(large),
                   [](const SweepRecord& r) { return r.n_spins >= 500; });
      write_file(dir / ("asymptote" + ext), asymptote_table(fit_asymptote(large)), f);
      std::cerr << "coupling " << format_number(cfg.coupling) << " rad/s, files in " << dir.string()
                << '\n';
    }
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
