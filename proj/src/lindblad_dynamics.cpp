#include "lmg/lindblad_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lmg/error.hpp"

namespace lmg {

namespace {

// rho = A + iB with A symmetric and B antisymmetric. Keeping the two real
// parts apart lets the commutator run as plain real column operations.
struct SplitState {
  Eigen::MatrixXd re;
  Eigen::MatrixXd im;
};

// out = H X - X H for tridiagonal H.
void commutator(const Tridiagonal& h, const Eigen::MatrixXd& x, Eigen::MatrixXd& out) {
  const Eigen::Index n = x.rows();
  const Eigen::VectorXd& d = h.diagonal;
  const Eigen::VectorXd& e = h.off_diagonal;
  for (Eigen::Index j = 0; j < n; ++j) {
    auto o = out.col(j);
    const auto xj = x.col(j);
    o.array() = (d.array() - d[j]) * xj.array();
    if (n > 1) {
      o.head(n - 1).array() += e.array() * xj.tail(n - 1).array();
      o.tail(n - 1).array() += e.array() * xj.head(n - 1).array();
      if (j > 0) o.noalias() -= e[j - 1] * x.col(j - 1);
      if (j + 1 < n) o.noalias() -= e[j] * x.col(j + 1);
    }
  }
}

class Integrator {
 public:
  Integrator(const DephasingGenerator& gen)
      : gen_(gen), rates_(dephasing_rates_elementwise(gen.jump, gen.dephasing)) {
    const Eigen::Index n = gen.dim();
    scratch_.re.resize(n, n);
    scratch_.im.resize(n, n);
    for (auto* k : {&k1_, &k2_, &k3_, &k4_, &stage_}) {
      k->re.resize(n, n);
      k->im.resize(n, n);
    }
  }

  void rhs(const SplitState& s, SplitState& out) {
    // d(A + iB)/dt = (C_B + D.A) + i(-C_A + D.B), C_X = [H, X]
    commutator(gen_.hamiltonian, s.im, out.re);
    commutator(gen_.hamiltonian, s.re, out.im);
    out.re.array() += rates_.array() * s.re.array();
    out.im.array() = rates_.array() * s.im.array() - out.im.array();
  }

  void step(SplitState& s, double h) {
    rhs(s, k1_);
    stage_.re = s.re + (0.5 * h) * k1_.re;
    stage_.im = s.im + (0.5 * h) * k1_.im;
    rhs(stage_, k2_);
    stage_.re = s.re + (0.5 * h) * k2_.re;
    stage_.im = s.im + (0.5 * h) * k2_.im;
    rhs(stage_, k3_);
    stage_.re = s.re + h * k3_.re;
    stage_.im = s.im + h * k3_.im;
    rhs(stage_, k4_);
    const double w = h / 6.0;
    s.re += w * (k1_.re + 2.0 * k2_.re + 2.0 * k3_.re + k4_.re);
    s.im += w * (k1_.im + 2.0 * k2_.im + 2.0 * k3_.im + k4_.im);
  }

 private:
  const DephasingGenerator& gen_;
  Eigen::MatrixXd rates_;
  SplitState scratch_, k1_, k2_, k3_, k4_, stage_;
};

double spectral_width(const Tridiagonal& h) {
  if (h.size() < 2) return 0.0;
  const EigenSystemD eig = eigh_tridiagonal(h);
  return eig.values[eig.size() - 1] - eig.values[0];
}

double target_step(const DephasingGenerator& gen, double width, const EvolveOptions& opt) {
  const double jmax = gen.jump.size() ? gen.jump.cwiseAbs().maxCoeff() : 0.0;
  const double omega = width + gen.dephasing * jmax * jmax;
  if (!(omega > 0.0)) return 0.0;
  return 2.0 * std::numbers::pi / omega / opt.steps_per_period;
}

SplitState split(const DensityMatrix& rho) { return {rho.real(), rho.imag()}; }

double hermiticity_of(const SplitState& s) {
  return std::max((s.re - s.re.transpose()).cwiseAbs().maxCoeff(),
                  (s.im + s.im.transpose()).cwiseAbs().maxCoeff());
}

void symmetrize(SplitState& s) {
  s.re = 0.5 * (s.re + s.re.transpose()).eval();
  s.im = 0.5 * (s.im - s.im.transpose()).eval();
}

Complex sandwich(const Eigen::VectorXd& a, const SplitState& s, const Eigen::VectorXd& b) {
  return {a.dot(s.re * b), a.dot(s.im * b)};
}

CoherenceTrace run(const DephasingGenerator& gen, const Doublet<double>& dbl,
                   const DensityMatrix& rho0, double t_final, int n_samples, double width,
                   const EvolveOptions& opt) {
  if (!(t_final > 0.0)) throw InvalidParameter("t_final must be positive");
  if (n_samples < 2) throw InvalidParameter("need at least two samples");
  if (rho0.rows() != gen.dim() || rho0.cols() != gen.dim())
    throw InvalidParameter("initial state dimension does not match the generator");
  require_density(rho0);

  const double h_target = target_step(gen, width, opt);
  const double interval = t_final / (n_samples - 1);
  const long per_sample =
      h_target > 0.0 ? std::max(1L, static_cast<long>(std::ceil(interval / h_target))) : 1L;
  const double h = interval / static_cast<double>(per_sample);

  Integrator integ(gen);
  CoherenceTrace tr;
  tr.step = h;

  {
    SplitState full = split(rho0), half = split(rho0);
    integ.step(full, h);
    integ.step(half, 0.5 * h);
    integ.step(half, 0.5 * h);
    tr.local_error_estimate =
        std::max((full.re - half.re).cwiseAbs().maxCoeff(),
                 (full.im - half.im).cwiseAbs().maxCoeff()) * 16.0 / 15.0;
  }

  const Eigen::VectorXd& v0 = dbl.v0;
  const Eigen::VectorXd& v1 = dbl.v1;
  const Eigen::VectorXd p = (v0 + v1) / std::numbers::sqrt2;
  const Eigen::VectorXd r = (v0 - v1) / std::numbers::sqrt2;

  SplitState s = split(rho0);
  tr.min_population = 1.0;
  auto record = [&](double t) {
    const double herm = hermiticity_of(s);
    symmetrize(s);
    const double trace_err = std::abs(s.re.trace() - 1.0);
    const double min_pop = s.re.diagonal().minCoeff();
    tr.max_trace_error = std::max(tr.max_trace_error, trace_err);
    tr.max_hermiticity = std::max(tr.max_hermiticity, herm);
    tr.min_population = std::min(tr.min_population, min_pop);
    if (!(trace_err <= opt.trace_tol) || !(herm <= opt.hermiticity_tol) ||
        !(min_pop >= -opt.population_tol)) {
      std::ostringstream os;
      os << "density-matrix invariant violated at t=" << t << " (trace error " << trace_err
         << ", hermiticity " << herm << ", min population " << min_pop << ", step " << h
         << "); reduce the step size";
      throw IntegrationError(os.str());
    }
    tr.times.push_back(t);
    tr.rho01.push_back(sandwich(v0, s, v1));
    tr.rho_pr.push_back(sandwich(p, s, r));
    tr.pop_diff_eigen.push_back(v0.dot(s.re * v0) - v1.dot(s.re * v1));
    tr.pop_diff_pointer.push_back(p.dot(s.re * p) - r.dot(s.re * r));
  };

  record(0.0);
  for (int k = 1; k < n_samples; ++k) {
    for (long q = 0; q < per_sample; ++q) integ.step(s, h);
    record(k * interval);
  }
  return tr;
}

}  // namespace

DephasingGenerator dicke_generator(const ModelParams& params) {
  return {build_hamiltonian(params), jz_diagonal(DickeBasis(params.n_spins)), params.dephasing};
}

Eigen::MatrixXd dephasing_rates_elementwise(const Eigen::VectorXd& jump, double dephasing) {
  const Eigen::Index n = jump.size();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index a = 0; a < n; ++a) {
      const double diff = jump[a] - jump[b];
      out(a, b) = -0.5 * dephasing * diff * diff;
    }
  return out;
}

Eigen::MatrixXd dephasing_rates_elementwise(int n_spins, double dephasing) {
  return dephasing_rates_elementwise(DickeBasis(n_spins).m_values(), dephasing);
}

DensityMatrix lindblad_rhs(const DephasingGenerator& gen, const DensityMatrix& rho) {
  Integrator integ(gen);
  SplitState s = split(rho), out;
  out.re.resize(rho.rows(), rho.cols());
  out.im.resize(rho.rows(), rho.cols());
  integ.rhs(s, out);
  DensityMatrix res(rho.rows(), rho.cols());
  res.real() = out.re;
  res.imag() = out.im;
  return res;
}

DensityCheck check_density(const DensityMatrix& rho) {
  DensityCheck c;
  c.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  c.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  c.min_population = rho.diagonal().real().minCoeff();
  return c;
}

void require_density(const DensityMatrix& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0)
    throw InvalidParameter("density matrix must be square and non-empty");
  const DensityCheck c = check_density(rho);
  if (c.trace_error > tol || c.hermiticity > 1e-12 || c.min_population < -1e-10) {
    std::ostringstream os;
    os << "not a density matrix (trace error " << c.trace_error << ", hermiticity "
       << c.hermiticity << ", min population " << c.min_population << ")";
    throw InvalidParameter(os.str());
  }
}

InitialState parse_initial_state(const std::string& text) {
  if (text == "pointer" || text == "P") return InitialState::pointer();
  if (text == "pointer_r" || text == "R") return {InitialState::Kind::PointerR, 0, 0, 0, 0};
  if (text.size() >= 2 && text[0] == 'e' && text.find_first_not_of("0123456789", 1) == std::string::npos)
    return InitialState::eigenstate(std::stoi(text.substr(1)));
  if (text.rfind("dicke:", 0) == 0) return InitialState::dicke(std::stoi(text.substr(6)));
  if (text.rfind("mixture:", 0) == 0) {
    std::istringstream is(text.substr(8));
    double w = 0, u = 0, v = 0;
    char c1 = 0, c2 = 0;
    if ((is >> w >> c1 >> u >> c2 >> v) && c1 == ',' && c2 == ',' && is.peek() == EOF)
      return InitialState::mixture(w, u, v);
  }
  throw InvalidParameter("unrecognised initial state '" + text + "'");
}

DensityMatrix initial_state(const InitialState& kind, const EigenSystemD& eig) {
  const Eigen::Index n = eig.size();
  auto pure = [&](const Eigen::VectorXd& psi) -> DensityMatrix {
    return (psi * psi.transpose()).cast<Complex>();
  };
  const Doublet<double> dbl = doublet(eig);
  const Eigen::VectorXd p = (dbl.v0 + dbl.v1) / std::numbers::sqrt2;
  const Eigen::VectorXd r = (dbl.v0 - dbl.v1) / std::numbers::sqrt2;

  switch (kind.kind) {
    case InitialState::Kind::Pointer: return pure(p);
    case InitialState::Kind::PointerR: return pure(r);
    case InitialState::Kind::Eigenstate: {
      if (kind.index < 0 || kind.index >= n)
        throw InvalidParameter("eigenstate index out of range");
      if (kind.index == 0) return pure(dbl.v0);
      if (kind.index == 1) return pure(dbl.v1);
      return pure(eig.vectors.col(kind.index));
    }
    case InitialState::Kind::DickeIndex: {
      if (kind.index < 0 || kind.index >= n)
        throw InvalidParameter("Dicke index out of range");
      DensityMatrix rho = DensityMatrix::Zero(n, n);
      rho(kind.index, kind.index) = 1.0;
      return rho;
    }
    case InitialState::Kind::DoubletMixture: {
      const double radius2 = 0.25 * kind.w * kind.w + kind.u * kind.u + kind.v * kind.v;
      if (radius2 > 0.25 + 1e-12)
        throw InvalidParameter("doublet mixture (w, u, v) is not positive semidefinite");
      const Complex c(kind.u, kind.v);
      DensityMatrix rho = 0.5 * (1.0 + kind.w) * pure(p) + 0.5 * (1.0 - kind.w) * pure(r);
      const DensityMatrix pr = (p * r.transpose()).cast<Complex>();
      rho += c * pr + std::conj(c) * pr.adjoint();
      return rho;
    }
  }
  throw InvalidParameter("unknown initial state kind");
}

CoherenceTrace evolve(const DephasingGenerator& gen, const Doublet<double>& doublet,
                      const DensityMatrix& rho0, double t_final, int n_samples,
                      const EvolveOptions& opt) {
  return run(gen, doublet, rho0, t_final, n_samples, spectral_width(gen.hamiltonian), opt);
}

CoherenceTrace evolve(const ModelParams& params, const EigenSystemD& eig,
                      const DensityMatrix& rho0, double t_final, int n_samples,
                      const EvolveOptions& opt) {
  const DephasingGenerator gen = dicke_generator(params);
  if (eig.size() != gen.dim()) throw InvalidParameter("eigensystem does not match params");
  const double width = eig.values[eig.size() - 1] - eig.values[0];
  return run(gen, doublet(eig), rho0, t_final, n_samples, width, opt);
}

CoherenceTrace evolve(const ModelParams& params, const DensityMatrix& rho0, double t_final,
                      int n_samples, const EvolveOptions& opt) {
  return evolve(params, eigh_tridiagonal(build_hamiltonian(params)), rho0, t_final, n_samples,
                opt);
}

DensityMatrix propagate(const DephasingGenerator& gen, const DensityMatrix& rho0,
                        double t_final, const EvolveOptions& opt) {
  const double h_target = target_step(gen, spectral_width(gen.hamiltonian), opt);
  const long steps =
      h_target > 0.0 ? std::max(1L, static_cast<long>(std::ceil(t_final / h_target))) : 1L;
  const double h = t_final / static_cast<double>(steps);
  Integrator integ(gen);
  SplitState s = split(rho0);
  for (long q = 0; q < steps; ++q) integ.step(s, h);
  DensityMatrix out(rho0.rows(), rho0.cols());
  out.real() = s.re;
  out.imag() = s.im;
  return out;
}

std::vector<double> channel_values(const CoherenceTrace& trace, DecayChannel channel) {
  std::vector<double> y(trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k) {
    switch (channel) {
      case DecayChannel::AbsRho01: y[k] = std::abs(trace.rho01[k]); break;
      case DecayChannel::ReRhoPR: y[k] = trace.rho_pr[k].real(); break;
      case DecayChannel::PopDiffEigen: y[k] = trace.pop_diff_eigen[k]; break;
    }
  }
  return y;
}

std::vector<double> channel_values(const CoherenceTrace& trace, OscillationChannel channel) {
  std::vector<double> y(trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k)
    y[k] = channel == OscillationChannel::ImRhoPR ? trace.rho_pr[k].imag() : trace.rho01[k].imag();
  return y;
}

DecayFit fit_decay(const CoherenceTrace& trace, DecayChannel channel, double t_lo, double t_hi) {
  const std::vector<double> y = channel_values(trace, channel);
  const std::size_t n = y.size();
  auto crosses = [&](std::size_t k) {
    return (k > 0 && y[k] * y[k - 1] < 0.0) || (k + 1 < n && y[k] * y[k + 1] < 0.0);
  };

  std::vector<double> xs, ls;
  bool any_nonzero = false;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = trace.times[k];
    if (t < t_lo || t > t_hi) continue;
    if (y[k] != 0.0) any_nonzero = true;
    if (y[k] == 0.0 || crosses(k)) continue;
    xs.push_back(t);
    ls.push_back(std::log(std::abs(y[k])));
  }
  if (!any_nonzero) throw FitError("channel is identically zero in the fit window");
  if (xs.size() < 10) throw FitError("fewer than 10 usable samples in the fit window");

  const Eigen::Map<const Eigen::ArrayXd> x(xs.data(), static_cast<Eigen::Index>(xs.size()));
  const Eigen::Map<const Eigen::ArrayXd> l(ls.data(), static_cast<Eigen::Index>(ls.size()));
  const double xm = x.mean(), lm = l.mean();
  const double sxx = (x - xm).square().sum();
  const double sxl = ((x - xm) * (l - lm)).sum();
  const double sll = (l - lm).square().sum();
  const double slope = sxl / sxx;

  DecayFit fit;
  fit.rate = -slope;
  fit.r_squared = sll > 0.0 ? (sxl * sxl) / (sxx * sll) : 1.0;
  fit.samples = xs.size();
  fit.accepted = fit.r_squared >= 0.98;
  return fit;
}

double fit_frequency(const CoherenceTrace& trace, OscillationChannel channel) {
  const std::vector<double> y = channel_values(trace, channel);
  std::vector<double> crossings;
  for (std::size_t k = 1; k < y.size(); ++k) {
    if (y[k - 1] == 0.0 && k > 1) continue;
    if ((y[k - 1] < 0.0 && y[k] >= 0.0) || (y[k - 1] > 0.0 && y[k] <= 0.0)) {
      if (y[k] == 0.0) {
        crossings.push_back(trace.times[k]);
      } else {
        const double frac = y[k - 1] / (y[k - 1] - y[k]);
        crossings.push_back(trace.times[k - 1] + frac * (trace.times[k] - trace.times[k - 1]));
      }
    }
  }
  if (crossings.size() < 3) throw FitError("fewer than 3 zero crossings");
  const double half_period =
      (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  return std::numbers::pi / half_period;
}

}  // namespace lmg
