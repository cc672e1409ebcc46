#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "lmg/lindblad_dynamics.hpp"
#include "lmg/spectral_observables.hpp"
#include "oracles.hpp"

using namespace lmg;
using doctest::Approx;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

CoherenceTrace synthetic(const std::vector<double>& t, const std::vector<double>& y) {
  CoherenceTrace tr;
  tr.times = t;
  for (double v : y) {
    tr.rho01.emplace_back(v, v);
    tr.rho_pr.emplace_back(v, v);
    tr.pop_diff_eigen.push_back(v);
    tr.pop_diff_pointer.push_back(v);
  }
  return tr;
}

void check_identity(const CoherenceTrace& tr) {
  double worst = 0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const Complex want(0.5 * tr.pop_diff_eigen[k], -tr.rho01[k].imag());
    worst = std::max(worst, std::abs(tr.rho_pr[k] - want));
    worst = std::max(worst, std::abs(tr.pop_diff_pointer[k] - 2 * tr.rho01[k].real()));
  }
  CHECK(worst <= 1e-10);
}

}  // namespace

TEST_CASE("elementwise dephasing rates") {
  const Eigen::MatrixXd d = dephasing_rates_elementwise(2, 1.0);
  CHECK(d(0, 2) == -2.0);
  CHECK(d(2, 0) == -2.0);
  CHECK(d(0, 1) == -0.5);
  for (int i = 0; i < 3; ++i) CHECK(d(i, i) == 0.0);
  const Eigen::MatrixXd big = dephasing_rates_elementwise(9, 0.3);
  CHECK(big.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK((big - big.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dissipator and generator against dense triple products") {
  for (int n : {2, 5, 12, 20}) {
    const double gamma = 0.37;
    const oracle::Spin s = oracle::spin(n);
    const oracle::CMat rho = oracle::random_density(n + 1, 11u + n);
    const Eigen::MatrixXd rates = dephasing_rates_elementwise(n, gamma);
    const Eigen::MatrixXcd elementwise = rates.cast<Complex>().cwiseProduct(rho);
    const double scale = 0.25 * n * n * gamma;
    CHECK(max_abs(elementwise - oracle::dissipator(s.jz, rho, gamma)) <= 1e-14 * scale);

    const ModelParams p = make_params(n, 0.8, 1.3, gamma);
    const Eigen::MatrixXcd rhs = lindblad_rhs(dicke_generator(p), rho);
    const oracle::CMat want = oracle::lindblad(oracle::lmg_dense(n, 1.3, 0.8 * 1.3), s.jz, rho, gamma);
    CHECK(max_abs(rhs - want) <= 1e-13 * std::max(1.0, max_abs(want)));
  }
}

TEST_CASE("RK4 propagation against the superoperator exponential") {
  const int n = 4;
  const double gamma = 0.3, t = 2.0;
  const ModelParams p = make_params(n, 0.7, 1.0, gamma);
  const oracle::CMat rho0 = oracle::random_density(n + 1, 3);
  EvolveOptions opt;
  opt.steps_per_period = 400;
  const Eigen::MatrixXcd got = propagate(dicke_generator(p), rho0, t, opt);
  const oracle::CMat want =
      oracle::evolve_exact(oracle::lmg_dense(n, 1.0, 0.7), oracle::spin(n).jz, gamma, rho0, t);
  CHECK(max_abs(got - want) <= 1e-9);
}

TEST_CASE("pure dephasing moves no Dicke population") {
  const int n = 10;
  DephasingGenerator g;
  g.hamiltonian.diagonal = Eigen::VectorXd::Zero(n + 1);
  g.hamiltonian.off_diagonal = Eigen::VectorXd::Zero(n);
  g.jump = DickeBasis(n).m_values();
  g.dephasing = 0.2;
  const oracle::CMat rho0 = oracle::random_density(n + 1, 5);
  const Eigen::MatrixXcd rho = propagate(g, rho0, 3.0);
  CHECK((rho.diagonal() - rho0.diagonal()).cwiseAbs().maxCoeff() <= 1e-14);
  // coherences decay at exactly the elementwise rate
  const Eigen::MatrixXd rates = dephasing_rates_elementwise(n, 0.2);
  CHECK(std::abs(rho(0, 1) - rho0(0, 1) * std::exp(3.0 * rates(0, 1))) <= 1e-9);
}

TEST_CASE("initial states") {
  const ModelParams p = make_params(30, 0.9);
  const EigenSystemD eig = eigh_tridiagonal(build_hamiltonian(p));
  const Doublet<double> d = doublet(eig);
  const Eigen::VectorXd pv = (d.v0 + d.v1) / std::numbers::sqrt2;
  const Eigen::VectorXd rv = (d.v0 - d.v1) / std::numbers::sqrt2;

  const DensityMatrix pointer = initial_state(InitialState::pointer(), eig);
  CHECK(std::abs(d.v0.dot(pointer.real() * d.v1) - 0.5) <= 1e-14);
  CHECK(std::abs(d.v0.dot(pointer.real() * d.v0) - d.v1.dot(pointer.real() * d.v1)) <= 1e-14);
  CHECK(check_density(pointer).trace_error <= 1e-14);

  const DensityMatrix w1 = initial_state(InitialState::mixture(1, 0, 0), eig);
  CHECK(pv.dot(w1.real() * pv) - rv.dot(w1.real() * rv) == Approx(1.0).epsilon(1e-14));
  CHECK(max_abs(w1 - pointer) <= 1e-14);

  const DensityMatrix mix = initial_state(InitialState::mixture(0.2, 0.1, -0.3), eig);
  const Complex pr(pv.dot(mix.real() * rv), pv.dot(mix.imag() * rv));
  CHECK(std::abs(pr - Complex(0.1, -0.3)) <= 1e-14);
  CHECK_THROWS_AS(initial_state(InitialState::mixture(1, 0.5, 0), eig), InvalidParameter);

  const DensityMatrix e3 = initial_state(InitialState::eigenstate(3), eig);
  CHECK(eig.vectors.col(3).dot(e3.real() * eig.vectors.col(3)) == Approx(1.0));
  const DensityMatrix top = initial_state(InitialState::dicke(30), eig);
  CHECK(top(30, 30) == Complex(1.0, 0.0));
  CHECK_THROWS_AS(initial_state(InitialState::eigenstate(31), eig), InvalidParameter);
  CHECK_THROWS_AS(initial_state(InitialState::dicke(-1), eig), InvalidParameter);

  CHECK(parse_initial_state("pointer").kind == InitialState::Kind::Pointer);
  CHECK(parse_initial_state("pointer_r").kind == InitialState::Kind::PointerR);
  CHECK(parse_initial_state("e1").index == 1);
  CHECK(parse_initial_state("dicke:4").index == 4);
  const InitialState m = parse_initial_state("mixture:0.5,0.25,-0.1");
  CHECK(m.w == 0.5);
  CHECK(m.u == 0.25);
  CHECK(m.v == -0.1);
  CHECK_THROWS_AS(parse_initial_state("bogus"), InvalidParameter);
  CHECK_THROWS_AS(parse_initial_state("mixture:1,2"), InvalidParameter);

  DensityMatrix bad = pointer;
  bad(0, 0) += 0.1;
  CHECK_THROWS_AS(require_density(bad), InvalidParameter);
}

TEST_CASE("unitary limit: eigenstate is stationary") {
  const ModelParams p = make_params(40, 0.9, 1.0, 0.0);
  const EigenSystemD eig = eigh_tridiagonal(build_hamiltonian(p));
  const CoherenceTrace tr = evolve(p, eig, initial_state(InitialState::eigenstate(0), eig), 5.0, 21);
  CHECK(tr.size() == 21);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == Approx(5.0));
  for (std::size_t k = 0; k < tr.size(); ++k) {
    CHECK(std::abs(tr.rho01[k]) <= 1e-12);
    CHECK(tr.pop_diff_eigen[k] == Approx(1.0).epsilon(1e-12));
  }
  CHECK(tr.max_trace_error <= 1e-12);
  check_identity(tr);
}

TEST_CASE("unitary limit: pointer precesses at the splitting (N=100)") {
  const ModelParams p = make_params(100, 0.95, 1.0, 0.0);
  const EigenSystemD eig = eigh_tridiagonal(build_hamiltonian(p));
  const double de = doublet(eig).delta_e;
  const double horizon = 4.5 * 2 * std::numbers::pi / de;
  const CoherenceTrace tr = evolve(p, eig, initial_state(InitialState::pointer(), eig), horizon, 361);
  for (std::size_t k = 0; k < tr.size(); ++k) CHECK(std::abs(tr.rho01[k]) == Approx(0.5).epsilon(1e-9));
  CHECK(tr.max_trace_error <= 1e-9);
  CHECK(tr.max_hermiticity <= 1e-12);
  CHECK(tr.local_error_estimate < 1e-10);
  check_identity(tr);
  const double w = fit_frequency(tr, OscillationChannel::ImRhoPR);
  CHECK(std::abs(w / de - 1) <= 0.005);
  CHECK(std::abs(fit_frequency(tr, OscillationChannel::ImRho01) / de - 1) <= 0.005);
}

TEST_CASE("dissipative run keeps the density-matrix invariants") {
  const ModelParams p = make_params(24, 0.9, 1.0, 0.02);
  const EigenSystemD eig = eigh_tridiagonal(build_hamiltonian(p));
  const CoherenceTrace tr =
      evolve(p, eig, initial_state(InitialState::mixture(0.3, 0.2, 0.1), eig), 40.0, 101);
  CHECK(tr.max_trace_error <= 1e-9);
  CHECK(tr.max_hermiticity <= 1e-12);
  CHECK(tr.min_population >= -1e-10);
  check_identity(tr);
  // two identical runs are bitwise identical
  const CoherenceTrace again =
      evolve(p, eig, initial_state(InitialState::mixture(0.3, 0.2, 0.1), eig), 40.0, 101);
  CHECK(again.rho01 == tr.rho01);
}

TEST_CASE("an unstable step is reported") {
  const ModelParams p = make_params(20, 0.9, 1.0, 2.0);
  const EigenSystemD eig = eigh_tridiagonal(build_hamiltonian(p));
  EvolveOptions opt;
  opt.steps_per_period = 1;
  CHECK_THROWS_AS(evolve(p, eig, initial_state(InitialState::pointer(), eig), 50.0, 11, opt),
                  IntegrationError);
  CHECK_THROWS_AS(evolve(p, eig, initial_state(InitialState::pointer(), eig), -1.0, 11),
                  InvalidParameter);
  CHECK_THROWS_AS(evolve(p, eig, initial_state(InitialState::pointer(), eig), 1.0, 1),
                  InvalidParameter);
}

TEST_CASE("decay fit on synthetic data") {
  std::vector<double> t, y;
  for (int k = 0; k < 100; ++k) {
    t.push_back(0.02 * k);
    y.push_back(std::exp(-3.0 * t.back()));
  }
  const CoherenceTrace tr = synthetic(t, y);
  for (DecayChannel c : {DecayChannel::AbsRho01, DecayChannel::ReRhoPR, DecayChannel::PopDiffEigen}) {
    const DecayFit f = fit_decay(tr, c, 0.0, 2.0);
    CHECK(f.rate == Approx(3.0).epsilon(1e-6));
    CHECK(f.r_squared == Approx(1.0).epsilon(1e-12));
    CHECK(f.accepted);
    CHECK(f.samples == 100);
  }
  CHECK_THROWS_AS(fit_decay(tr, DecayChannel::ReRhoPR, 0.0, 0.1), FitError);
  const CoherenceTrace zero = synthetic(t, std::vector<double>(100, 0.0));
  CHECK_THROWS_AS(fit_decay(zero, DecayChannel::ReRhoPR, 0.0, 2.0), FitError);

  // an oscillating channel has poor log-linearity and is flagged
  std::vector<double> osc;
  for (double tk : t) osc.push_back(std::cos(9 * tk) * std::exp(-tk) + 1.2);
  const DecayFit flagged = fit_decay(synthetic(t, osc), DecayChannel::ReRhoPR, 0.0, 2.0);
  CHECK_FALSE(flagged.accepted);
}

TEST_CASE("frequency fit on synthetic data") {
  std::vector<double> t, y;
  for (int k = 0; k < 4000; ++k) {
    t.push_back(0.005 * k);
    y.push_back(std::cos(5 * t.back()) * std::exp(-t.back() / 10));
  }
  CHECK(fit_frequency(synthetic(t, y), OscillationChannel::ImRhoPR) == Approx(5.0).epsilon(0.005));
  std::vector<double> flat(t.size(), 1.0);
  CHECK_THROWS_AS(fit_frequency(synthetic(t, flat), OscillationChannel::ImRho01), FitError);
}
