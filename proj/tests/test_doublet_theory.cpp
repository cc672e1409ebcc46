#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "lmg/doublet_theory.hpp"
#include "lmg/sweep.hpp"
#include "oracles.hpp"
#include "reference_values.hpp"

using namespace lmg;
using doctest::Approx;

namespace {

oracle::Mat sigma_x(double a) {
  oracle::Mat m(2, 2);
  m << 0, a, a, 0;
  return m;
}

oracle::Mat diag2(double a, double b) {
  oracle::Mat m = oracle::Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Eigen::Matrix2cd random_qubit(std::mt19937& rng) {
  return oracle::random_density(2, rng());
}

const GeometricFactors& benchmark370() {
  static const GeometricFactors f =
      geometric_factors(make_params(370, 0.95, calibrate_coupling(), kDefaultDephasing));
  return f;
}

}  // namespace

TEST_CASE("doublet Liouvillian spectrum") {
  const DoubletSpectrum s = doublet_spectrum(ref::kJ01, 0.05);
  CHECK(s.eigenvalues[0] == 0.0);
  CHECK(s.eigenvalues[1] == 0.0);
  CHECK(s.eigenvalues[2] == Approx(-245.1).epsilon(1e-3));
  CHECK(s.eigenvalues[3] == s.eigenvalues[2]);
  CHECK(s.modes[0] == "trace");
  const DoubletSpectrum zero = doublet_spectrum(0.0, 0.05);
  for (double v : zero.eigenvalues) CHECK(v == 0.0);
  CHECK_THROWS_AS(doublet_spectrum(1.0, -0.1), InvalidParameter);

  // against a numerical diagonalisation of the superoperator
  for (double j01 : {0.5, 3.0, 49.51}) {
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(doublet_superoperator(j01, 0.05));
    std::vector<double> got;
    for (int k = 0; k < 4; ++k) {
      CHECK(std::abs(es.eigenvalues()[k].imag()) <= 1e-12 * j01 * j01);
      got.push_back(es.eigenvalues()[k].real());
    }
    std::sort(got.begin(), got.end());
    const DoubletSpectrum want = doublet_spectrum(j01, 0.05);
    CHECK(got[0] == Approx(want.eigenvalues[2]).epsilon(1e-12));
    CHECK(got[1] == Approx(want.eigenvalues[3]).epsilon(1e-12));
    CHECK(std::abs(got[2]) <= 1e-12 * j01 * j01);
    CHECK(std::abs(got[3]) <= 1e-12 * j01 * j01);
  }
}

TEST_CASE("superoperator matches the dense construction") {
  for (double de : {0.0, 0.7, 12.0}) {
    for (double j01 : {0.0, 1.3, 49.51}) {
      const oracle::CMat want = oracle::superoperator(diag2(0, de), sigma_x(j01), 0.05);
      const Eigen::Matrix4cd got = doublet_superoperator(j01, 0.05, de);
      CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, want.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("closed form against the matrix exponential") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> ju(0.1, 60), gu(0.001, 0.2), tu(0, 3);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double j01 = ju(rng), gamma = gu(rng);
    const double t = tu(rng) / (2 * gamma * j01 * j01);
    const Eigen::Matrix2cd rho0 = random_qubit(rng);
    const oracle::CMat want = oracle::evolve_exact(diag2(0, 0), sigma_x(j01), gamma, rho0, t);
    worst = std::max(worst, (doublet_closed_form(rho0, j01, gamma, t) - want).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("RK4 on the degenerate pointer-basis doublet reproduces the closed form") {
  const GeometricFactors f = geometric_factors(make_params(100, 0.95));
  const double gamma = 0.05;
  const double rate = 2 * gamma * f.j01 * f.j01;
  const double horizon = 5.0 / rate;
  const DephasingGenerator gen = pointer_doublet_generator(f.j01, 0.0, gamma);
  const Doublet<double> dbl = pointer_basis_doublet();
  Eigen::Matrix2d u;
  u.col(0) = dbl.v0;
  u.col(1) = dbl.v1;

  std::mt19937 rng(9);
  EvolveOptions opt;
  opt.steps_per_period = 1000;
  for (int trial = 0; trial < 4; ++trial) {
    const Eigen::Matrix2cd rho_eigen = random_qubit(rng);
    // state handed to the engine in {P, R}
    const Eigen::Matrix2cd rho_pointer = u.cast<Complex>() * rho_eigen * u.transpose().cast<Complex>();
    const CoherenceTrace tr = evolve(gen, dbl, rho_pointer, horizon, 51, opt);
    double worst = 0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const Eigen::Matrix2cd want = doublet_closed_form(rho_eigen, f.j01, gamma, tr.times[k]);
      worst = std::max(worst, std::abs(tr.rho01[k] - want(0, 1)));
      worst = std::max(worst, std::abs(tr.pop_diff_eigen[k] - (want(0, 0) - want(1, 1)).real()));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("non-degenerate pointer-basis doublet matches the superoperator exponential") {
  const double j01 = 2.0, gamma = 0.1, de = 3.0, t = 1.5;
  const DephasingGenerator gen = pointer_doublet_generator(j01, de, gamma);
  const Doublet<double> dbl = pointer_basis_doublet(de);
  Eigen::Matrix2d u;
  u.col(0) = dbl.v0;
  u.col(1) = dbl.v1;
  std::mt19937 rng(4);
  const Eigen::Matrix2cd rho_eigen = random_qubit(rng);
  EvolveOptions opt;
  opt.steps_per_period = 1000;
  const Eigen::Matrix2cd got_pointer =
      propagate(gen, u.cast<Complex>() * rho_eigen * u.transpose().cast<Complex>(), t, opt);
  const Eigen::Matrix2cd got = u.transpose().cast<Complex>() * got_pointer * u.cast<Complex>();
  // H = diag(0, dE) differs from -(dE/2) sigma_z by a constant
  const oracle::CMat want = oracle::evolve_exact(diag2(0, de), sigma_x(j01), gamma, rho_eigen, t);
  CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("two-channel roots") {
  const TwoChannelRoots z = two_channel_roots(0.05, 100.0, 0.0);
  CHECK(z.regime == Damping::Overdamped);
  CHECK(z.lambda_plus == Complex(0.0, 0.0));
  CHECK(z.lambda_minus.real() == Approx(-5.0));
  CHECK_FALSE(z.envelope_rate.has_value());

  const GeometricFactors& f = benchmark370();
  const TwoChannelRoots r = two_channel_roots(0.05, f.g_loc, f.delta_e);
  CHECK(r.regime == Damping::Underdamped);
  CHECK(to_string(r.regime) == "underdamped");
  CHECK(r.lambda_plus.real() == Approx(-166.85).epsilon(1e-4));
  CHECK(r.lambda_plus.imag() == Approx(1299.3).epsilon(1e-4));
  CHECK(r.lambda_minus == std::conj(r.lambda_plus));
  CHECK(ref::matches(*r.envelope_rate / (0.05 * f.g_01), ref::Quoted{ref::kEtaQuantum, 3}));
  // mean-field rate over the exact eigenstate rate
  CHECK(ref::matches(100 * (*f.eta_mf / *f.eta_exact - 1), ref::Quoted{ref::kOverestimatePercent, 1}));

  const TwoChannelRoots crit = two_channel_roots(1.0, 4.0, 2.0);
  CHECK(crit.regime == Damping::Critical);
  CHECK(crit.lambda_plus == Complex(-2.0, 0.0));
  CHECK_THROWS_AS(two_channel_roots(-1.0, 1.0, 1.0), InvalidParameter);
}

TEST_CASE("two-channel Vieta relations and the slow root") {
  for (double g : {10.0, 1e3, 1e5, 1e8}) {
    const double gamma = 0.05, de = 3.0;
    const TwoChannelRoots r = two_channel_roots(gamma, g, de);
    const Complex sum = r.lambda_plus + r.lambda_minus;
    const Complex prod = r.lambda_plus * r.lambda_minus;
    CHECK(sum.real() == Approx(-gamma * g).epsilon(1e-12));
    CHECK(prod.real() == Approx(de * de).epsilon(1e-12));
    CHECK(std::abs(prod.imag()) <= 1e-12 * de * de);
    if (gamma * g / de >= 20) {
      CHECK(r.regime == Damping::Overdamped);
      CHECK(std::abs(r.lambda_plus.real() / (-de * de / (gamma * g)) - 1) <= 0.01);
      CHECK(r.lambda_plus.real() < 0);
    }
  }
}

TEST_CASE("two-channel matrix eigenvalues are the roots plus the u channel") {
  for (double g : {10.0, 200.0, 5e3}) {
    const double gamma = 0.05, de = 3.0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(two_channel_matrix(gamma, g, de));
    std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + 3);
    const TwoChannelRoots r = two_channel_roots(gamma, g, de);
    for (Complex want : {Complex(-gamma * g, 0), r.lambda_plus, r.lambda_minus}) {
      double best = 1e300;
      for (Complex v : ev) best = std::min(best, std::abs(v - want));
      CHECK(best <= 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("three-regime labels across the table grid") {
  const double coupling = calibrate_coupling();
  auto label = [&](int n, double g = 0.95) {
    const ModelParams p = make_params(n, g, coupling, kDefaultDephasing);
    return to_string(three_regime_label(p, geometric_factors(p), kDefaultDephasing));
  };
  CHECK(label(100) == "regime_1");
  CHECK(label(370) == "regime_2");
  CHECK(label(500) == "transitional");
  CHECK(label(1000) == "regime_3_proxy");
  CHECK(label(2000) == "regime_3_proxy");
  // small ordered moment
  CHECK(label(20) == "regime_1");
  CHECK(label(2000, 0.9999) == "regime_1");
}
