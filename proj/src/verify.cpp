#include "lmg/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace lmg {

bool VerifyReport::passed() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; }));
}

namespace {

CheckResult make_check(std::string name, const ModelParams& p, double value, double bound) {
  return {std::move(name), p.n_spins, p.gamma_over_j(), value, bound, value <= bound};
}

CheckResult theory_check(std::string name, double value, double bound) {
  return {std::move(name), 0, 0.0, value, bound, value <= bound};
}

double rel(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace

std::vector<CheckResult> point_checks(const ModelParams& params, const EigenSystemD& eig,
                                      Fault fault) {
  std::vector<CheckResult> out;
  const Eigen::Index n = eig.size();
  const double half_n = 0.5 * params.n_spins;
  const Eigen::VectorXd m = DickeBasis(params.n_spins).m_values();
  const Eigen::MatrixXd& v = eig.vectors;

  {
    const Eigen::VectorXd weights = fault == Fault::JzSignFlip ? m.cwiseAbs().eval() : m;
    double worst = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (eig.parities[static_cast<std::size_t>(k)] == Parity::Unclassified) continue;
      worst = std::max(worst, std::abs((weights.array() * v.col(k).array().square()).sum()));
    }
    out.push_back(make_check("parity_diagonal", params, worst, 1e-10 * half_n));
  }

  const auto unclassified = std::count(eig.parities.begin(), eig.parities.end(), Parity::Unclassified);
  out.push_back(make_check("unclassified_states", params, static_cast<double>(unclassified), 0.0));

  const Doublet<double> dbl = doublet(eig);
  {
    double worst = 0;
    for (const Eigen::VectorXd* vi : {&dbl.v0, &dbl.v1}) {
      const Eigen::VectorXd a = m.cwiseProduct(*vi);
      const double sum = (v.transpose() * a).squaredNorm();
      worst = std::max(worst, rel(sum, jz2_expectation(*vi)));
    }
    out.push_back(make_check("completeness", params, worst, 1e-10));
  }

  out.push_back(make_check("jz2_between_doublet", params, std::abs(jz2_element(dbl.v0, dbl.v1)),
                           1e-10 * half_n * half_n));

  {
    const Eigen::VectorXd p = (dbl.v0 + dbl.v1) / std::numbers::sqrt2;
    const Eigen::VectorXd r = (dbl.v0 - dbl.v1) / std::numbers::sqrt2;
    const double j01 = jz_element(dbl.v0, dbl.v1);
    const double pointer = 0.5 * (jz_element(p, p) - jz_element(r, r));
    out.push_back(make_check("j01_identity", params, rel(j01, pointer), 1e-12));
  }

  {
    const Eigen::MatrixXd gram = v.transpose() * v - Eigen::MatrixXd::Identity(n, n);
    out.push_back(make_check("orthonormality", params, gram.cwiseAbs().maxCoeff(), 1e-12));
  }

  {
    const Tridiagonal h = build_hamiltonian(params);
    const Eigen::MatrixXd res = h.apply(v) - v * eig.values.asDiagonal();
    const double scale = std::max(h.max_abs_entry(), 1e-300);
    out.push_back(make_check("residual", params, res.colwise().norm().maxCoeff() / scale, 1e-11));
  }

  const GeometricFactors f = geometric_factors(params, eig);
  out.push_back(make_check(
      "g01_decomposition", params,
      rel(f.g_01, f.j01 * f.j01 + 0.5 * (f.leakage_0 + f.leakage_1)), 1e-10));

  if (params.ordered()) {
    const BogoliubovReport b = bogoliubov_report(params, f);
    const double ref2 = f.mean_field_moment * f.mean_field_moment;
    out.push_back(make_check("bogoliubov_ledger", params,
                             std::abs(b.delta_g_total - (b.delta_g_bog - b.leakage_avg)) / ref2,
                             1e-10));
    if (f.eta_mf && f.eta_quantum)
      out.push_back(make_check("eta_decomposition", params, rel(*f.eta_mf, 2.0 * *f.eta_quantum),
                               1e-12));
  }
  return out;
}

std::vector<CheckResult> theory_checks(const std::vector<double>& j01_values, double dephasing) {
  std::vector<CheckResult> out;
  for (double j01 : j01_values) {
    const Eigen::Matrix4cd s = doublet_superoperator(j01, dephasing);
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(s);
    std::array<double, 4> got{};
    for (int k = 0; k < 4; ++k) got[k] = es.eigenvalues()[k].real();
    double imag = es.eigenvalues().imag().cwiseAbs().maxCoeff();
    std::sort(got.begin(), got.end());
    std::array<double, 4> want = doublet_spectrum(j01, dephasing).eigenvalues;
    std::sort(want.begin(), want.end());
    const double scale = std::max(1.0, 2.0 * dephasing * j01 * j01);
    double worst = imag;
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(got[k] - want[k]));
    out.push_back(theory_check("doublet_spectrum", worst / scale, 1e-12));

    // exp(tS) through the eigendecomposition against the closed form
    const Eigen::Matrix4cd vecs = es.eigenvectors();
    const Eigen::Matrix4cd inv = vecs.inverse();
    Eigen::Matrix2cd rho0;
    rho0 << 0.7, Complex(0.2, -0.3), Complex(0.2, 0.3), 0.3;
    const double t = 1.0 / scale;
    const Eigen::Vector4cd evolved =
        vecs * (es.eigenvalues() * t).array().exp().matrix().asDiagonal() * inv *
        Eigen::Map<const Eigen::Vector4cd>(rho0.data());
    const Eigen::Matrix2cd closed = doublet_closed_form(rho0, j01, dephasing, t);
    out.push_back(theory_check(
        "doublet_closed_form",
        (Eigen::Map<const Eigen::Matrix2cd>(evolved.data()) - closed).cwiseAbs().maxCoeff(),
        1e-12));
  }

  struct Case { double gamma, g_loc, delta_e; };
  const Case cases[] = {{0.05, 6673.875, 1310.0}, {0.05, 6673.875, 0.0},
                        {0.05, 195000.0, 1e-4},   {1.0, 20.0, 10.0}, {0.5, 10.0, 0.1}};
  for (const Case& c : cases) {
    const TwoChannelRoots r = two_channel_roots(c.gamma, c.g_loc, c.delta_e);
    const double k = c.gamma * c.g_loc;
    const double sum_err = std::abs(r.lambda_plus + r.lambda_minus + k) / std::max(k, 1e-300);
    const double prod = std::abs(r.lambda_plus * r.lambda_minus - c.delta_e * c.delta_e);
    const double prod_err = c.delta_e > 0 ? prod / (c.delta_e * c.delta_e) : prod;
    out.push_back(theory_check("two_channel_vieta", std::max(sum_err, prod_err), 1e-12));
    const double re = std::max(r.lambda_plus.real(), r.lambda_minus.real());
    out.push_back(theory_check("two_channel_stable", std::max(re, 0.0), 0.0));
  }
  return out;
}

VerifyReport run_verification(const VerifyOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  struct Point { int n; double g; };
  std::vector<Point> points;
  for (double g : opt.gamma_grid)
    for (int n : opt.n_grid) points.push_back({n, g});

  std::vector<std::vector<CheckResult>> per_point(points.size());
  std::vector<double> j01s(points.size(), 0.0);
  parallel_for(points.size(), opt.workers, [&](std::size_t i) {
    const ModelParams p = make_params(points[i].n, points[i].g, 1.0, opt.dephasing);
    const EigenSystemD eig = eigh_tridiagonal(build_hamiltonian(p));
    per_point[i] = point_checks(p, eig, opt.fault);
    const Doublet<double> d = doublet(eig);
    j01s[i] = jz_element(d.v0, d.v1);
  });

  VerifyReport report;
  for (auto& v : per_point) report.checks.insert(report.checks.end(), v.begin(), v.end());
  j01s.push_back(0.0);
  const auto theory = theory_checks(j01s, opt.dephasing);
  report.checks.insert(report.checks.end(), theory.begin(), theory.end());
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Json report_json(const VerifyReport& report) {
  Json checks = Json::array();
  for (const CheckResult& c : report.checks) {
    Json j = Json::object();
    j["name"] = c.name;
    if (c.n_spins > 0) {
      j["n_spins"] = c.n_spins;
      j["gamma_over_j"] = number(c.gamma_over_j);
    }
    j["value"] = number(c.value);
    j["bound"] = number(c.bound);
    j["passed"] = c.passed;
    checks.push_back(std::move(j));
  }
  Json out = Json::object();
  out["passed"] = report.passed();
  out["failures"] = report.failures();
  out["checks"] = std::move(checks);
  return out;
}

}  // namespace lmg
