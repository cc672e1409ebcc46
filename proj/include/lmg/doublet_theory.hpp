#pragma once

// Closed forms for the two-state truncation of the dephasing dynamics:
// the doublet Liouvillian spectrum and the two-channel (u, v, w) projection
// in the pointer basis.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <string>

#include "lmg/dicke_model.hpp"
#include "lmg/lindblad_dynamics.hpp"
#include "lmg/spectral_observables.hpp"

namespace lmg {

struct DoubletSpectrum {
  std::array<double, 4> eigenvalues{};  // 1/s
  std::array<std::string, 4> modes;     // conserved or decaying combination
};

/// gamma J01^2 x {0, 0, -2, -2}.
DoubletSpectrum doublet_spectrum(double j01, double dephasing);

/// Liouvillian of the doublet with Jz -> J01 sigma_x and H -> diag(0, delta_e)
/// acting on vec(rho) (column-major, rho00, rho10, rho01, rho11).
Eigen::Matrix4cd doublet_superoperator(double j01, double dephasing, double delta_e = 0.0);

/// Degenerate-doublet evolution in the {E0, E1} basis: trace and
/// rho01 + rho10 conserved, rho00 - rho11 and rho01 - rho10 damped by
/// exp(-2 gamma J01^2 t).
Eigen::Matrix2cd doublet_closed_form(const Eigen::Matrix2cd& rho0, double j01, double dephasing,
                                     double t);

/// Two-level generator in the pointer basis {P, R}: H = -(delta_e/2) sigma_x,
/// Jz = J01 sigma_z. With delta_e = 0 this is the degenerate doublet and the
/// RK4 engine can be checked against doublet_closed_form.
DephasingGenerator pointer_doublet_generator(double j01, double delta_e, double dephasing);

/// E0, E1 = (P +- R)/sqrt2 expressed in the {P, R} basis.
Doublet<double> pointer_basis_doublet(double delta_e = 0.0);

enum class Damping { Overdamped, Underdamped, Critical };
std::string to_string(Damping d);

struct TwoChannelRoots {
  std::complex<double> lambda_plus;
  std::complex<double> lambda_minus;
  Damping regime = Damping::Critical;
  std::optional<double> envelope_rate;  // gamma G_loc / 2 when underdamped
};

/// Roots of lambda^2 + gamma G_loc lambda + dE^2 = 0.
TwoChannelRoots two_channel_roots(double dephasing, double g_loc, double delta_e);

/// The (u, v, w) generator with the couplings -dE/2 and +2dE.
Eigen::Matrix3d two_channel_matrix(double dephasing, double g_loc, double delta_e);

enum class Regime { Regime1, Regime2, Regime3Proxy, Transitional };
std::string to_string(Regime r);

/// Priority: regime_1 (N m* <= 30 or gap ratio <= 3), then regime_3_proxy
/// (secular < 1), then regime_2 (secular >= 10 and gap ratio > 3).
/// The gap ratio is compared at one decimal, the precision it is tabulated at.
Regime three_regime_label(const ModelParams& params, const GeometricFactors& factors,
                          double dephasing);

}  // namespace lmg
