#pragma once

// Full eigendecomposition of a real symmetric tridiagonal matrix by implicit
// QL iteration with Wilkinson shifts (tqli form). Palindromic bands are first
// folded into reflection-parity sectors, which fixes the parity of every
// eigenvector including members of degenerate pairs.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "lmg/dicke_model.hpp"
#include "lmg/error.hpp"

namespace lmg {

template <typename Scalar>
struct EigenSystem {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector values;                // ascending
  Matrix vectors;               // column k belongs to values[k]
  std::vector<Parity> parities; // reflection parity of each column

  Eigen::Index size() const { return values.size(); }
};

struct EighOptions {
  int max_sweeps = 50;  // per eigenvalue
  // Below this relative gap a pair counts as exactly degenerate; the even
  // member is then ordered first.
  double degenerate_rel_tol = 1e-13;
  double parity_tol = 1e-8;
  bool resolve_parity = true;  // fold palindromic bands by parity
};

namespace detail {

template <typename Scalar, typename Derived>
Parity classify_parity(const Eigen::MatrixBase<Derived>& v, Scalar tol) {
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> r = v.reverse();
  if ((v - r).cwiseAbs().maxCoeff() <= tol) return Parity::Even;
  if ((v + r).cwiseAbs().maxCoeff() <= tol) return Parity::Odd;
  return Parity::Unclassified;
}

// In-place implicit QL on (d, e); Z accumulates the rotations.
template <typename Scalar>
void implicit_ql(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& d,
                 Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& e,
                 Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& z, int max_sweeps) {
  using std::abs;
  using std::hypot;
  const int n = static_cast<int>(d.size());
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Eigen::Index rows = z.rows();

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const Scalar dd = abs(d[m]) + abs(d[m + 1]);
        if (abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter++ == max_sweeps) {
        std::ostringstream os;
        os << "implicit QL did not converge within " << max_sweeps
           << " sweeps for the block starting at index " << l;
        throw ConvergenceError(static_cast<std::size_t>(l), os.str());
      }

      // Wilkinson shift from the leading 2x2 of the unreduced block.
      Scalar g = (d[l + 1] - d[l]) / (Scalar(2) * e[l]);
      Scalar r = hypot(g, Scalar(1));
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      Scalar s = 1, c = 1, p = 0;
      int i;
      bool underflow = false;
      for (i = m - 1; i >= l; --i) {
        Scalar f = s * e[i];
        const Scalar b = c * e[i];
        r = hypot(f, g);
        e[i + 1] = r;
        if (r == Scalar(0)) {
          d[i + 1] -= p;
          e[m] = 0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + Scalar(2) * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;

        Scalar* zi = z.col(i).data();
        Scalar* zj = z.col(i + 1).data();
        for (Eigen::Index k = 0; k < rows; ++k) {
          f = zj[k];
          zj[k] = s * zi[k] + c * f;
          zi[k] = c * zi[k] - s * f;
        }
      }
      if (underflow && i >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0;
    } while (m != l);
  }
}

}  // namespace detail

// Fold a palindromic tridiagonal matrix into its reflection-even and
// reflection-odd sectors. Both sectors are again tridiagonal.
template <typename Scalar>
struct ParitySectors {
  TridiagonalOperator<Scalar> even;
  TridiagonalOperator<Scalar> odd;  // empty when n == 1
};

template <typename Scalar>
ParitySectors<Scalar> fold_by_reflection(const TridiagonalOperator<Scalar>& op) {
  using Vector = typename TridiagonalOperator<Scalar>::Vector;
  using std::sqrt;
  const Eigen::Index n = op.size();
  const Eigen::Index p = n / 2;
  ParitySectors<Scalar> out;
  if (n % 2 == 1) {
    out.even.diagonal = op.diagonal.head(p + 1);
    out.even.off_diagonal = op.off_diagonal.head(p);
    if (p > 0) out.even.off_diagonal[p - 1] *= sqrt(Scalar(2));
    out.odd.diagonal = op.diagonal.head(p);
    out.odd.off_diagonal = p > 0 ? Vector(op.off_diagonal.head(p - 1)) : Vector();
  } else {
    out.even.diagonal = op.diagonal.head(p);
    out.even.off_diagonal = op.off_diagonal.head(p - 1);
    out.even.diagonal[p - 1] += op.off_diagonal[p - 1];
    out.odd.diagonal = op.diagonal.head(p);
    out.odd.off_diagonal = op.off_diagonal.head(p - 1);
    out.odd.diagonal[p - 1] -= op.off_diagonal[p - 1];
  }
  return out;
}

namespace detail {

template <typename Scalar>
void sorted_ql(const TridiagonalOperator<Scalar>& op, int max_sweeps,
               Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& values,
               Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& vectors) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = op.size();
  Vector d = op.diagonal;
  Vector e = Vector::Zero(n);
  if (n > 1) e.head(n - 1) = op.off_diagonal;
  Matrix z = Matrix::Identity(n, n);
  implicit_ql<Scalar>(d, e, z, max_sweeps);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return d[a] < d[b]; });
  values.resize(n);
  vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    values[k] = d[order[static_cast<std::size_t>(k)]];
    vectors.col(k) = z.col(order[static_cast<std::size_t>(k)]);
  }
}

}  // namespace detail

template <typename Scalar>
EigenSystem<Scalar> eigh_tridiagonal(const TridiagonalOperator<Scalar>& op,
                                     const EighOptions& opt = {}) {
  using Vector = typename EigenSystem<Scalar>::Vector;
  using Matrix = typename EigenSystem<Scalar>::Matrix;
  using std::abs;
  using std::sqrt;

  const Eigen::Index n = op.size();
  if (n == 0 || op.off_diagonal.size() != n - 1)
    throw InvalidParameter("tridiagonal bands have inconsistent lengths");

  EigenSystem<Scalar> out;
  const Scalar norm = op.max_abs_entry();

  if (opt.resolve_parity && n > 1 && op.reflection_symmetric()) {
    // Each sector is diagonalised on its own, so every vector carries an
    // exact reflection parity even inside degenerate pairs.
    const ParitySectors<Scalar> sec = fold_by_reflection(op);
    Vector ev, ov;
    Matrix ez, oz;
    detail::sorted_ql(sec.even, opt.max_sweeps, ev, ez);
    if (sec.odd.size() > 0) detail::sorted_ql(sec.odd, opt.max_sweeps, ov, oz);

    const Eigen::Index p = n / 2;
    const bool has_center = n % 2 == 1;
    const Scalar inv_sqrt2 = Scalar(1) / sqrt(Scalar(2));
    auto unfold = [&](const auto& y, bool even) {
      Vector v = Vector::Zero(n);
      for (Eigen::Index j = 0; j < p; ++j) {
        v[j] = y[j] * inv_sqrt2;
        v[n - 1 - j] = even ? v[j] : -v[j];
      }
      if (has_center && even) v[p] = y[p];
      return v;
    };

    // Merge ascending; an exactly degenerate (even, odd) pair lists even first.
    const Scalar dtol = static_cast<Scalar>(opt.degenerate_rel_tol) * norm;
    out.values.resize(n);
    out.vectors.resize(n, n);
    out.parities.resize(static_cast<std::size_t>(n));
    Eigen::Index ie = 0, io = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      bool take_even;
      if (io >= ov.size()) take_even = true;
      else if (ie >= ev.size()) take_even = false;
      else take_even = ev[ie] <= ov[io] + dtol;
      if (take_even) {
        out.values[k] = ev[ie];
        out.vectors.col(k) = unfold(ez.col(ie), true);
        out.parities[static_cast<std::size_t>(k)] = Parity::Even;
        ++ie;
      } else {
        out.values[k] = ov[io];
        out.vectors.col(k) = unfold(oz.col(io), false);
        out.parities[static_cast<std::size_t>(k)] = Parity::Odd;
        ++io;
      }
    }
    // Keep the value array non-decreasing when a degenerate pair was reordered.
    for (Eigen::Index k = 1; k < n; ++k)
      if (out.values[k] < out.values[k - 1]) std::swap(out.values[k], out.values[k - 1]);
  } else {
    detail::sorted_ql(op, opt.max_sweeps, out.values, out.vectors);
    out.parities.assign(static_cast<std::size_t>(n), Parity::Unclassified);
  }

  // Sign convention: largest-magnitude coefficient positive, ties to the
  // lowest index.
  const Scalar tie = Scalar(1e-8);
  const Scalar ptol = static_cast<Scalar>(opt.parity_tol);
  for (Eigen::Index k = 0; k < n; ++k) {
    auto col = out.vectors.col(k);
    const Scalar big = col.cwiseAbs().maxCoeff();
    Eigen::Index pick = 0;
    while (abs(col[pick]) < big * (Scalar(1) - tie)) ++pick;
    if (col[pick] < Scalar(0)) col = -col;
    if (out.parities[static_cast<std::size_t>(k)] == Parity::Unclassified)
      out.parities[static_cast<std::size_t>(k)] = detail::classify_parity<Scalar>(col, ptol);
  }
  return out;
}

/// The two lowest states and their splitting. v1 is oriented so that
/// <v0|Jz|v1> >= 0 with m_i = i - (n-1)/2.
template <typename Scalar>
struct Doublet {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v1;
  Scalar delta_e;
};

template <typename Scalar>
Doublet<Scalar> doublet(const EigenSystem<Scalar>& eig) {
  if (eig.size() < 2) throw InvalidParameter("doublet needs at least two states");
  const Eigen::Index n = eig.size();
  Doublet<Scalar> out{eig.vectors.col(0), eig.vectors.col(1),
                      std::max(Scalar(0), eig.values[1] - eig.values[0])};
  Scalar j01 = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar m = Scalar(i) - Scalar(n - 1) / Scalar(2);
    j01 += m * out.v0[i] * out.v1[i];
  }
  if (j01 < Scalar(0)) out.v1 = -out.v1;
  return out;
}

using EigenSystemD = EigenSystem<double>;

}  // namespace lmg
