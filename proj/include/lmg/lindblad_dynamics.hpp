#pragma once

// Collective dephasing master equation
//   d rho/dt = -i[H, rho] + gamma (Jz rho Jz - {Jz^2, rho}/2)
// integrated in a basis where Jz is diagonal, so the dissipator acts
// elementwise: (d rho/dt)_{ab} += -(gamma/2)(j_a - j_b)^2 rho_{ab}.

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "lmg/dicke_model.hpp"
#include "lmg/tridiag_eigen.hpp"

namespace lmg {

using Complex = std::complex<double>;
using DensityMatrix = Eigen::MatrixXcd;

/// Tridiagonal Hamiltonian plus dephasing by a jump operator that is
/// diagonal in the same basis.
struct DephasingGenerator {
  Tridiagonal hamiltonian;
  Eigen::VectorXd jump;  // diagonal of Jz
  double dephasing = 0;

  Eigen::Index dim() const { return hamiltonian.size(); }
};

DephasingGenerator dicke_generator(const ModelParams& params);

/// Entry (a, b) = -(gamma/2)(m_a - m_b)^2 over the Dicke basis.
Eigen::MatrixXd dephasing_rates_elementwise(int n_spins, double dephasing);
Eigen::MatrixXd dephasing_rates_elementwise(const Eigen::VectorXd& jump, double dephasing);

/// Right-hand side of the master equation.
DensityMatrix lindblad_rhs(const DephasingGenerator& gen, const DensityMatrix& rho);

struct DensityCheck {
  double trace_error = 0;     // |tr rho - 1|
  double hermiticity = 0;     // max |rho - rho^dagger|
  double min_population = 0;  // min_a Re rho_aa
};
DensityCheck check_density(const DensityMatrix& rho);

/// Throws InvalidParameter if rho fails the density-matrix invariants.
void require_density(const DensityMatrix& rho, double tol = 1e-9);

struct InitialState {
  enum class Kind { Pointer, PointerR, Eigenstate, DickeIndex, DoubletMixture };
  Kind kind = Kind::Pointer;
  int index = 0;  // eigen index or Dicke basis index (i = m + N/2)
  double w = 1, u = 0, v = 0;  // pointer-basis parameters for DoubletMixture

  static InitialState pointer() { return {}; }
  static InitialState eigenstate(int k) { return {Kind::Eigenstate, k, 0, 0, 0}; }
  static InitialState dicke(int i) { return {Kind::DickeIndex, i, 0, 0, 0}; }
  static InitialState mixture(double w, double u, double v) {
    return {Kind::DoubletMixture, 0, w, u, v};
  }
};

/// Parses "pointer", "pointer_r", "e<k>", "dicke:<i>", "mixture:w,u,v".
InitialState parse_initial_state(const std::string& text);

/// Pointer states P, R = (v0 +- v1)/sqrt2 from the oriented doublet.
/// DoubletMixture builds rho = [[(1+w)/2, u+iv], [u-iv, (1-w)/2]] in {P, R}.
DensityMatrix initial_state(const InitialState& kind, const EigenSystemD& eig);

struct CoherenceTrace {
  std::vector<double> times;
  std::vector<Complex> rho01;   // <E0|rho|E1>
  std::vector<Complex> rho_pr;  // <P|rho|R>
  std::vector<double> pop_diff_eigen;    // rho00 - rho11
  std::vector<double> pop_diff_pointer;  // rhoPP - rhoRR

  double step = 0;                  // RK4 step actually used
  double local_error_estimate = 0;  // step-doubling estimate at t = 0
  double max_trace_error = 0;
  double max_hermiticity = 0;
  double min_population = 0;

  std::size_t size() const { return times.size(); }
};

struct EvolveOptions {
  int steps_per_period = 40;  // RK4 steps per period of the fastest mode
  double trace_tol = 1e-9;
  double hermiticity_tol = 1e-12;
  double population_tol = 1e-10;
};

/// Fixed-step RK4 with samples at uniform times including t = 0. The doublet
/// (v0, v1) defines the projections recorded in the trace.
CoherenceTrace evolve(const DephasingGenerator& gen, const Doublet<double>& doublet,
                      const DensityMatrix& rho0, double t_final, int n_samples,
                      const EvolveOptions& opt = {});

CoherenceTrace evolve(const ModelParams& params, const EigenSystemD& eig,
                      const DensityMatrix& rho0, double t_final, int n_samples,
                      const EvolveOptions& opt = {});

CoherenceTrace evolve(const ModelParams& params, const DensityMatrix& rho0, double t_final,
                      int n_samples, const EvolveOptions& opt = {});

/// Final density matrix of a plain RK4 run (no sampling), used by tests.
DensityMatrix propagate(const DephasingGenerator& gen, const DensityMatrix& rho0,
                        double t_final, const EvolveOptions& opt = {});

enum class DecayChannel { AbsRho01, ReRhoPR, PopDiffEigen };
enum class OscillationChannel { ImRhoPR, ImRho01 };

struct DecayFit {
  double rate = 0;       // 1/s
  double r_squared = 0;
  std::size_t samples = 0;
  bool accepted = false; // r_squared >= 0.98
};

/// Least-squares slope of log|channel| over t in [t_lo, t_hi]; samples with
/// a vanishing channel value are skipped.
DecayFit fit_decay(const CoherenceTrace& trace, DecayChannel channel, double t_lo, double t_hi);

/// Angular frequency from the mean spacing of successive zero crossings.
double fit_frequency(const CoherenceTrace& trace, OscillationChannel channel);

std::vector<double> channel_values(const CoherenceTrace& trace, DecayChannel channel);
std::vector<double> channel_values(const CoherenceTrace& trace, OscillationChannel channel);

}  // namespace lmg
