#include "lmg/spectral_observables.hpp"

#include <cmath>
#include <limits>

namespace lmg {

namespace {

Eigen::ArrayXd m_array(Eigen::Index n) {
  const double half = 0.5 * static_cast<double>(n - 1);
  return Eigen::ArrayXd::LinSpaced(n, -half, half);
}

}  // namespace

double jz_element(const Eigen::Ref<const Eigen::VectorXd>& va,
                  const Eigen::Ref<const Eigen::VectorXd>& vb) {
  return (m_array(va.size()) * va.array() * vb.array()).sum();
}

double jz2_expectation(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return (m_array(v.size()).square() * v.array().square()).sum();
}

double jz2_element(const Eigen::Ref<const Eigen::VectorXd>& va,
                   const Eigen::Ref<const Eigen::VectorXd>& vb) {
  return (m_array(va.size()).square() * va.array() * vb.array()).sum();
}

double gamma_ab(const Eigen::Ref<const Eigen::VectorXd>& va,
                const Eigen::Ref<const Eigen::VectorXd>& vb, double dephasing) {
  return 0.5 * dephasing *
         (jz2_expectation(va) + jz2_expectation(vb) - 2.0 * jz_element(va, va) * jz_element(vb, vb));
}

GeometricFactors geometric_factors(const ModelParams& params, const EigenSystemD& eig) {
  params.validate();
  if (eig.size() != params.n_spins + 1)
    throw InvalidParameter("eigensystem dimension does not match N + 1");

  const Doublet<double> dbl = doublet(eig);
  GeometricFactors f;
  f.delta_e = dbl.delta_e;
  f.j01 = jz_element(dbl.v0, dbl.v1);
  f.jz2_0 = jz2_expectation(dbl.v0);
  f.jz2_1 = jz2_expectation(dbl.v1);
  f.g_01 = 0.5 * (f.jz2_0 + f.jz2_1);

  // Completeness: <Ei|Jz^2|Ei> = sum_k <Ei|Jz|Ek>^2, so the k >= 2 part is
  // the second moment minus its doublet projection.
  const double d00 = jz_element(dbl.v0, dbl.v0);
  const double d11 = jz_element(dbl.v1, dbl.v1);
  f.leakage_0 = f.jz2_0 - d00 * d00 - f.j01 * f.j01;
  f.leakage_1 = f.jz2_1 - d11 * d11 - f.j01 * f.j01;

  if (eig.size() > 2) {
    const double gap = eig.values[2] - eig.values[0];
    f.gap_ratio = f.delta_e > 0 ? gap / f.delta_e : std::numeric_limits<double>::infinity();
  }

  const int n = params.n_spins;
  const double mstar = params.order_parameter();
  f.mean_field_moment = 0.5 * n * mstar;
  f.g_loc = 0.5 * (n * mstar) * (n * mstar);
  f.overlap_s = std::pow(params.gamma_over_j(), n);
  f.instanton_action = mstar < 1.0 ? std::atanh(mstar) - mstar
                                   : std::numeric_limits<double>::infinity();

  if (params.ordered() && f.g_01 > 0) {
    const double ref = f.mean_field_moment * f.mean_field_moment;
    f.eta_mf = f.g_loc / f.g_01;
    f.eta_quantum = ref / f.g_01;
    f.eta_exact = 1.0 + f.j01 * f.j01 / f.g_01;
    f.delta_g_total = ref - f.g_01;
    f.delta_zp = f.mean_field_moment - f.j01;
  }
  return f;
}

GeometricFactors geometric_factors(const ModelParams& params) {
  return geometric_factors(params, eigh_tridiagonal(build_hamiltonian(params)));
}

BogoliubovReport bogoliubov_report(const ModelParams& params, const GeometricFactors& f) {
  if (!params.ordered()) throw InvalidParameter("Bogoliubov ledger needs Gamma < J");
  BogoliubovReport r;
  const double ref = f.mean_field_moment;
  r.delta_zp = ref - f.j01;
  r.delta_g_bog = ref * ref - f.j01 * f.j01;
  r.leakage_avg = 0.5 * (f.leakage_0 + f.leakage_1);
  r.delta_g_total = ref * ref - f.g_01;
  return r;
}

BogoliubovReport bogoliubov_report(const ModelParams& params, const EigenSystemD& eig) {
  return bogoliubov_report(params, geometric_factors(params, eig));
}

double secular_parameter(const GeometricFactors& factors, double dephasing) {
  if (factors.delta_e == 0.0) return 0.0;
  if (!(dephasing > 0.0) || !(factors.g_01 > 0.0))
    throw InvalidParameter("secular parameter needs dephasing > 0 and G_01 > 0");
  return 2.0 * factors.delta_e / (dephasing * factors.g_01);
}

}  // namespace lmg
