#include "lmg/doublet_theory.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

namespace lmg {

DoubletSpectrum doublet_spectrum(double j01, double dephasing) {
  if (dephasing < 0.0) throw InvalidParameter("dephasing must be non-negative");
  const double rate = -2.0 * dephasing * j01 * j01;
  DoubletSpectrum s;
  s.eigenvalues = {0.0, 0.0, rate, rate};
  s.modes = {"trace", "re_rho01", "pop_diff_eigen", "im_rho01"};
  return s;
}

Eigen::Matrix4cd doublet_superoperator(double j01, double dephasing, double delta_e) {
  using M2 = Eigen::Matrix2cd;
  const M2 id = M2::Identity();
  M2 h = M2::Zero();
  h(1, 1) = delta_e;
  M2 l;
  l << 0.0, j01, j01, 0.0;
  const M2 l2 = l * l;
  const Complex i(0.0, 1.0);
  // vec(A X B) = (B^T kron A) vec(X)
  Eigen::Matrix4cd s = -i * (Eigen::kroneckerProduct(id, h) - Eigen::kroneckerProduct(h.transpose(), id)).eval();
  s += dephasing * (Eigen::kroneckerProduct(l.transpose(), l) -
                    0.5 * Eigen::kroneckerProduct(id, l2) -
                    0.5 * Eigen::kroneckerProduct(l2.transpose(), id)).eval();
  return s;
}

Eigen::Matrix2cd doublet_closed_form(const Eigen::Matrix2cd& rho0, double j01, double dephasing,
                                     double t) {
  const double decay = std::exp(-2.0 * dephasing * j01 * j01 * t);
  const Complex tr = rho0(0, 0) + rho0(1, 1);
  const Complex pop = (rho0(0, 0) - rho0(1, 1)) * decay;
  const Complex sym = rho0(0, 1) + rho0(1, 0);
  const Complex anti = (rho0(0, 1) - rho0(1, 0)) * decay;
  Eigen::Matrix2cd out;
  out(0, 0) = 0.5 * (tr + pop);
  out(1, 1) = 0.5 * (tr - pop);
  out(0, 1) = 0.5 * (sym + anti);
  out(1, 0) = 0.5 * (sym - anti);
  return out;
}

DephasingGenerator pointer_doublet_generator(double j01, double delta_e, double dephasing) {
  DephasingGenerator g;
  g.hamiltonian.diagonal = Eigen::Vector2d::Zero();
  g.hamiltonian.off_diagonal = Eigen::VectorXd::Constant(1, -0.5 * delta_e);
  g.jump = Eigen::Vector2d(j01, -j01);
  g.dephasing = dephasing;
  return g;
}

Doublet<double> pointer_basis_doublet(double delta_e) {
  Doublet<double> d;
  d.v0 = Eigen::Vector2d(1.0, 1.0) / std::numbers::sqrt2;
  d.v1 = Eigen::Vector2d(1.0, -1.0) / std::numbers::sqrt2;
  d.delta_e = delta_e;
  return d;
}

std::string to_string(Damping d) {
  switch (d) {
    case Damping::Overdamped: return "overdamped";
    case Damping::Underdamped: return "underdamped";
    case Damping::Critical: return "critical";
  }
  return "unknown";
}

TwoChannelRoots two_channel_roots(double dephasing, double g_loc, double delta_e) {
  if (dephasing < 0.0 || g_loc < 0.0 || delta_e < 0.0)
    throw InvalidParameter("two-channel inputs must be non-negative");
  const double half = 0.5 * dephasing * g_loc;
  const double disc = half * half - delta_e * delta_e;
  TwoChannelRoots r;
  if (disc > 0.0) {
    // The fast root carries no cancellation; the slow one follows from the
    // product of the roots.
    const double fast = -half - std::sqrt(disc);
    r.lambda_minus = fast;
    r.lambda_plus = fast != 0.0 ? delta_e * delta_e / fast : 0.0;
    r.regime = Damping::Overdamped;
  } else if (disc < 0.0) {
    const double w = std::sqrt(-disc);
    r.lambda_plus = {-half, w};
    r.lambda_minus = {-half, -w};
    r.regime = Damping::Underdamped;
    r.envelope_rate = half;
  } else {
    r.lambda_plus = r.lambda_minus = -half;
    r.regime = Damping::Critical;
  }
  return r;
}

Eigen::Matrix3d two_channel_matrix(double dephasing, double g_loc, double delta_e) {
  const double k = dephasing * g_loc;
  Eigen::Matrix3d m;
  m << -k, 0.0, 0.0,
       0.0, -k, -0.5 * delta_e,
       0.0, 2.0 * delta_e, 0.0;
  return m;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Regime1: return "regime_1";
    case Regime::Regime2: return "regime_2";
    case Regime::Regime3Proxy: return "regime_3_proxy";
    case Regime::Transitional: return "transitional";
  }
  return "unknown";
}

Regime three_regime_label(const ModelParams& params, const GeometricFactors& factors,
                          double dephasing) {
  const double nm = params.n_spins * params.order_parameter();
  const double gap = std::isfinite(factors.gap_ratio) ? std::round(factors.gap_ratio * 10.0) / 10.0
                                                      : factors.gap_ratio;
  if (nm <= 30.0 || gap <= 3.0) return Regime::Regime1;
  const double sec = dephasing > 0.0 ? secular_parameter(factors, dephasing)
                                     : std::numeric_limits<double>::infinity();
  if (sec < 1.0) return Regime::Regime3Proxy;
  if (sec >= 10.0) return Regime::Regime2;
  return Regime::Transitional;
}

}  // namespace lmg
