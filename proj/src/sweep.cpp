#include "lmg/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "lmg/doublet_theory.hpp"
#include "lmg/error.hpp"

namespace lmg {

double calibrate_coupling(double target_delta_e, int n_ref, double gamma_over_j_ref) {
  if (!(target_delta_e > 0.0)) throw InvalidParameter("target splitting must be positive");
  const ModelParams ref = make_params(n_ref, gamma_over_j_ref, 1.0);
  if (!ref.ordered()) throw InvalidParameter("calibration point must be in the ordered phase");
  const double de = doublet(eigh_tridiagonal(build_hamiltonian(ref))).delta_e;
  if (!(de > 0.0)) throw InvalidParameter("splitting vanishes at the calibration point");
  return target_delta_e / de;
}

SweepConfig SweepConfig::calibrated(double target_delta_e, double dephasing) {
  SweepConfig c;
  c.coupling = calibrate_coupling(target_delta_e);
  c.dephasing = dephasing;
  c.reference_delta_e = target_delta_e;
  return c;
}

SweepConfig SweepConfig::with_coupling(double coupling, double dephasing) {
  SweepConfig c;
  c.coupling = coupling;
  c.dephasing = dephasing;
  const ModelParams ref = make_params(kReferenceN, kReferenceGammaOverJ, coupling, dephasing);
  c.reference_delta_e = doublet(eigh_tridiagonal(build_hamiltonian(ref))).delta_e;
  return c;
}

SweepRecord make_record(const ModelParams& params, const GeometricFactors& f,
                        double reference_delta_e) {
  SweepRecord r;
  r.n_spins = params.n_spins;
  r.gamma_over_j = params.gamma_over_j();
  r.delta_e_ratio = f.delta_e / reference_delta_e;
  r.g_loc = f.g_loc;
  r.g_01 = f.g_01;
  r.j01 = f.j01;
  r.eta_mf = f.eta_mf;
  r.eta_exact = f.eta_exact;
  r.eta_quantum = f.eta_quantum;
  r.gap_ratio = f.gap_ratio;
  r.secular_param = params.dephasing > 0.0 ? secular_parameter(f, params.dephasing) : 0.0;
  r.leakage_0 = f.leakage_0;
  r.leakage_1 = f.leakage_1;
  r.regime = to_string(three_regime_label(params, f, params.dephasing));
  return r;
}

SweepRecord evaluate_point(int n_spins, double gamma_over_j, const SweepConfig& cfg) {
  try {
    const ModelParams p = make_params(n_spins, gamma_over_j, cfg.coupling, cfg.dephasing);
    SweepRecord r = make_record(p, geometric_factors(p), cfg.reference_delta_e);
    r.gamma_over_j = gamma_over_j;  // as requested, not Gamma/J after rounding
    return r;
  } catch (const std::exception& e) {
    SweepRecord r;
    r.n_spins = n_spins;
    r.gamma_over_j = gamma_over_j;
    r.regime = "failed";
    r.error = e.what();
    return r;
  }
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& task) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) task(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<SweepRecord> sweep_n(double gamma_over_j, const std::vector<int>& n_list,
                                 const SweepConfig& cfg) {
  std::vector<int> ns = n_list;
  std::sort(ns.begin(), ns.end());
  std::vector<SweepRecord> out(ns.size());
  parallel_for(ns.size(), cfg.workers,
               [&](std::size_t i) { out[i] = evaluate_point(ns[i], gamma_over_j, cfg); });
  return out;
}

std::vector<SweepRecord> sweep_gamma(int n_spins, const std::vector<double>& gamma_over_j_list,
                                     const SweepConfig& cfg) {
  std::vector<double> gs = gamma_over_j_list;
  std::sort(gs.begin(), gs.end());
  std::vector<SweepRecord> out(gs.size());
  parallel_for(gs.size(), cfg.workers,
               [&](std::size_t i) { out[i] = evaluate_point(n_spins, gs[i], cfg); });
  return out;
}

std::vector<NormalizedRates> normalized_rates(const std::vector<int>& n_list, double gamma_over_j,
                                              const SweepConfig& cfg) {
  std::vector<int> ns = n_list;
  std::sort(ns.begin(), ns.end());
  std::vector<NormalizedRates> out(ns.size());
  parallel_for(ns.size(), cfg.workers, [&](std::size_t i) {
    const ModelParams p = make_params(ns[i], gamma_over_j, cfg.coupling, cfg.dephasing);
    if (!p.ordered()) throw InvalidParameter("normalised rates need Gamma < J");
    const GeometricFactors f = geometric_factors(p);
    const double ref = f.mean_field_moment * f.mean_field_moment;
    out[i] = {ns[i], 2.0, 2.0 * f.j01 * f.j01 / ref, f.g_01 / ref};
  });
  return out;
}

AsymptoteFit fit_asymptote(const std::vector<SweepRecord>& records) {
  AsymptoteFit fit;
  for (const SweepRecord& r : records)
    if (r.ok() && r.eta_mf) fit.c_at_n[r.n_spins] = (*r.eta_mf - 2.0) * r.n_spins;
  return fit;
}

}  // namespace lmg
