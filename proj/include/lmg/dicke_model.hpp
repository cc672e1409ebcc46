#pragma once

// LMG Hamiltonian  H = -(2J/N) Jz^2 - 2 Gamma Jx  in the symmetric Dicke
// sector |N/2, m>, m = -N/2 .. N/2. Basis index i <-> m_i = i - N/2.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lmg/error.hpp"

namespace lmg {

struct ModelParams {
  int n_spins = 370;
  double coupling = 1.0;   // J, rad/s
  double field = 0.95;     // Gamma, rad/s
  double dephasing = 0.05; // gamma_phi, 1/s

  /// m* = sqrt(1 - (Gamma/J)^2) in the ordered phase, 0 otherwise.
  double order_parameter() const {
    const double g = field / coupling;
    return g < 1.0 ? std::sqrt(1.0 - g * g) : 0.0;
  }
  double gamma_over_j() const { return field / coupling; }
  bool ordered() const { return field < coupling; }

  /// Throws InvalidParameter when an invariant is violated.
  void validate() const;

  /// Non-fatal notes attached to outputs (odd N).
  std::vector<std::string> warnings() const;
};

ModelParams make_params(int n_spins, double gamma_over_j, double coupling = 1.0,
                        double dephasing = 0.05);

/// Magnetic quantum numbers stored as twice their value so odd N stays exact.
class DickeBasis {
 public:
  explicit DickeBasis(int n_spins);

  int n_spins() const { return n_spins_; }
  Eigen::Index dim() const { return n_spins_ + 1; }
  double j_total() const { return 0.5 * n_spins_; }

  int twice_m(Eigen::Index i) const { return 2 * static_cast<int>(i) - n_spins_; }
  double m(Eigen::Index i) const { return 0.5 * twice_m(i); }

  /// m_0 .. m_N, strictly increasing in unit steps.
  Eigen::VectorXd m_values() const;

 private:
  int n_spins_;
};

/// Real symmetric tridiagonal matrix held as its two bands.
template <typename Scalar>
struct TridiagonalOperator {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector diagonal;
  Vector off_diagonal;  // off_diagonal[i] couples i and i+1

  Eigen::Index size() const { return diagonal.size(); }

  /// Largest absolute entry, used to scale tolerances.
  Scalar max_abs_entry() const {
    Scalar out = diagonal.size() ? diagonal.cwiseAbs().maxCoeff() : Scalar(0);
    if (off_diagonal.size()) out = std::max(out, off_diagonal.cwiseAbs().maxCoeff());
    return out;
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense() const {
    const Eigen::Index n = size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    out.diagonal() = diagonal;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      out(i, i + 1) = off_diagonal[i];
      out(i + 1, i) = off_diagonal[i];
    }
    return out;
  }

  /// y = T x, for any column-major block x.
  template <typename Derived>
  auto apply(const Eigen::MatrixBase<Derived>& x) const {
    using Out = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index n = size();
    Out y = diagonal.asDiagonal() * x;
    if (n > 1) {
      y.topRows(n - 1).noalias() += off_diagonal.asDiagonal() * x.bottomRows(n - 1);
      y.bottomRows(n - 1).noalias() += off_diagonal.asDiagonal() * x.topRows(n - 1);
    }
    return y;
  }

  /// Palindromic bands, i.e. symmetric under index reflection i -> n-1-i.
  bool reflection_symmetric(Scalar rel_tol = Scalar(1e-14)) const {
    const Scalar tol = rel_tol * max_abs_entry();
    if ((diagonal - diagonal.reverse()).cwiseAbs().maxCoeff() > tol) return false;
    if (off_diagonal.size() &&
        (off_diagonal - off_diagonal.reverse()).cwiseAbs().maxCoeff() > tol)
      return false;
    return true;
  }
};

using Tridiagonal = TridiagonalOperator<double>;

/// diagonal -2 J m^2 / N, off-diagonal -Gamma sqrt(Jt(Jt+1) - m(m+1)).
Tridiagonal build_hamiltonian(const ModelParams& params);

/// Jz is diagonal in the Dicke basis; returns m_values verbatim.
Eigen::VectorXd jz_diagonal(const DickeBasis& basis);

enum class Parity { Even, Odd, Unclassified };

int parity_sign(Parity p);  // +1, -1, 0
std::string to_string(Parity p);

/// Classifies c_m = +-c_{-m} within `tol` (max abs deviation).
Parity reflection_parity(const Eigen::Ref<const Eigen::VectorXd>& v, double tol = 1e-8);

}  // namespace lmg
