#pragma once

// Matrix elements of Jz in the eigenbasis and the geometric rate factors
// built from them.

#include <Eigen/Dense>

#include <optional>

#include "lmg/dicke_model.hpp"
#include "lmg/tridiag_eigen.hpp"

namespace lmg {

/// sum_m m va[m] vb[m]
double jz_element(const Eigen::Ref<const Eigen::VectorXd>& va,
                  const Eigen::Ref<const Eigen::VectorXd>& vb);

/// sum_m m^2 v[m]^2
double jz2_expectation(const Eigen::Ref<const Eigen::VectorXd>& v);

/// sum_m m^2 va[m] vb[m]
double jz2_element(const Eigen::Ref<const Eigen::VectorXd>& va,
                   const Eigen::Ref<const Eigen::VectorXd>& vb);

/// Diagonal Redfield coefficient of the coherence <a|rho|b> under
/// L = sqrt(gamma) Jz:  (gamma/2) [<Jz^2>_a + <Jz^2>_b - 2 <Jz>_a <Jz>_b].
double gamma_ab(const Eigen::Ref<const Eigen::VectorXd>& va,
                const Eigen::Ref<const Eigen::VectorXd>& vb, double dephasing);

struct GeometricFactors {
  double delta_e = 0;        // E1 - E0, rad/s
  double g_loc = 0;          // (N m*)^2 / 2
  double g_01 = 0;           // (<E0|Jz^2|E0> + <E1|Jz^2|E1>) / 2
  double j01 = 0;            // <E0|Jz|E1> >= 0
  double jz2_0 = 0;          // <E0|Jz^2|E0>
  double jz2_1 = 0;          // <E1|Jz^2|E1>
  double leakage_0 = 0;      // sum_{k>=2} |<E0|Jz|Ek>|^2
  double leakage_1 = 0;
  double gap_ratio = 0;      // (E2 - E0) / delta_e, +inf when delta_e == 0
  double mean_field_moment = 0;  // (N m* / 2)
  // Undefined (nullopt) outside the ordered phase, where G_loc = 0.
  std::optional<double> eta_mf;       // G_loc / G_01
  std::optional<double> eta_exact;    // 1 + J01^2 / G_01
  std::optional<double> eta_quantum;  // (N m*/2)^2 / G_01
  std::optional<double> delta_g_total;  // (N m*/2)^2 - G_01
  std::optional<double> delta_zp;       // N m*/2 - J01
  double overlap_s = 0;         // (Gamma/J)^N
  double instanton_action = 0;  // artanh(m*) - m*
};

/// Requires eig = eigh_tridiagonal(build_hamiltonian(params)).
GeometricFactors geometric_factors(const ModelParams& params, const EigenSystemD& eig);

/// Convenience: diagonalise and evaluate.
GeometricFactors geometric_factors(const ModelParams& params);

struct BogoliubovReport {
  double delta_zp = 0;      // N m*/2 - J01
  double delta_g_bog = 0;   // (N m*/2)^2 - J01^2
  double leakage_avg = 0;   // (leakage_0 + leakage_1) / 2
  double delta_g_total = 0; // (N m*/2)^2 - G_01
};

/// Throws InvalidParameter outside the ordered phase.
BogoliubovReport bogoliubov_report(const ModelParams& params, const EigenSystemD& eig);
BogoliubovReport bogoliubov_report(const ModelParams& params, const GeometricFactors& f);

/// 2 delta_e / (gamma_phi G_01), i.e. 2 dE T2 with T2 = 1/(gamma_phi G_01).
double secular_parameter(const GeometricFactors& factors, double dephasing);

}  // namespace lmg
