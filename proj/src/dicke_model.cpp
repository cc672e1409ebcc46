#include "lmg/dicke_model.hpp"

#include <sstream>

namespace lmg {

void ModelParams::validate() const {
  if (n_spins < 2) throw InvalidParameter("n_spins must be >= 2");
  if (!(coupling > 0.0) || !std::isfinite(coupling))
    throw InvalidParameter("coupling must be positive and finite");
  if (!(field >= 0.0) || !std::isfinite(field))
    throw InvalidParameter("field must be non-negative and finite");
  if (!(dephasing >= 0.0) || !std::isfinite(dephasing))
    throw InvalidParameter("dephasing must be non-negative and finite");
}

std::vector<std::string> ModelParams::warnings() const {
  std::vector<std::string> out;
  if (n_spins % 2 != 0) {
    std::ostringstream os;
    os << "odd N=" << n_spins << ": parity eigenvalues of exp(i pi Jx) are +-i; "
       << "reference numerics use even N";
    out.push_back(os.str());
  }
  return out;
}

ModelParams make_params(int n_spins, double gamma_over_j, double coupling, double dephasing) {
  ModelParams p;
  p.n_spins = n_spins;
  p.coupling = coupling;
  p.field = gamma_over_j * coupling;
  p.dephasing = dephasing;
  p.validate();
  return p;
}

DickeBasis::DickeBasis(int n_spins) : n_spins_(n_spins) {
  if (n_spins < 1) throw InvalidParameter("Dicke basis needs N >= 1");
}

Eigen::VectorXd DickeBasis::m_values() const {
  Eigen::VectorXd out(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) out[i] = m(i);
  return out;
}

Tridiagonal build_hamiltonian(const ModelParams& params) {
  params.validate();
  const DickeBasis basis(params.n_spins);
  const Eigen::Index n = basis.dim();
  const double jt = basis.j_total();
  const double kac = 2.0 * params.coupling / params.n_spins;

  Tridiagonal h;
  h.diagonal.resize(n);
  h.off_diagonal.resize(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = basis.m(i);
    h.diagonal[i] = -kac * m * m;
    if (i + 1 < n) {
      // <m+1| J+ |m> = sqrt(Jt(Jt+1) - m(m+1)); -2 Gamma Jx carries half of it twice.
      h.off_diagonal[i] = -params.field * std::sqrt(jt * (jt + 1.0) - m * (m + 1.0));
    }
  }
  return h;
}

Eigen::VectorXd jz_diagonal(const DickeBasis& basis) { return basis.m_values(); }

int parity_sign(Parity p) {
  switch (p) {
    case Parity::Even: return 1;
    case Parity::Odd: return -1;
    default: return 0;
  }
}

std::string to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    default: return "unclassified";
  }
}

Parity reflection_parity(const Eigen::Ref<const Eigen::VectorXd>& v, double tol) {
  const Eigen::VectorXd r = v.reverse();
  if ((v - r).cwiseAbs().maxCoeff() <= tol) return Parity::Even;
  if ((v + r).cwiseAbs().maxCoeff() <= tol) return Parity::Odd;
  return Parity::Unclassified;
}

}  // namespace lmg
