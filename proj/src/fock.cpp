#include "qrm2/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace qrm2 {

namespace {

// Tail amplitude a normalized state may carry on its two highest Fock levels
// before the cutoff is considered inadequate.
constexpr double kTailTolerance = 1e-12;

bool cutoff_adequate_for_squeeze(double r, int n_max) {
  return static_cast<double>(n_max) >= 3.0 * std::exp(4.0 * std::abs(r));
}

}  // namespace

LadderOperators ladder_operators(FockCutoff cutoff) {
  const int d = cutoff.fock_dim();
  std::vector<Triplet> a, a_dag, n_op, x_op;
  a.reserve(d);
  a_dag.reserve(d);
  n_op.reserve(d);
  x_op.reserve(2 * d);
  for (int n = 1; n < d; ++n) {
    double s = std::sqrt(static_cast<double>(n));
    a.emplace_back(n - 1, n, s);
    a_dag.emplace_back(n, n - 1, s);
    x_op.emplace_back(n - 1, n, s);
    x_op.emplace_back(n, n - 1, s);
  }
  for (int n = 0; n < d; ++n) n_op.emplace_back(n, n, static_cast<double>(n));
  return LadderOperators{
      OperatorMatrix::from_triplets(a, 1, d),
      OperatorMatrix::from_triplets(a_dag, 1, d),
      OperatorMatrix::from_triplets(n_op, 1, d),
      OperatorMatrix::from_triplets(x_op, 1, d),
  };
}

OperatorMatrix squeeze_operator(double r, FockCutoff cutoff) {
  if (!std::isfinite(r)) throw std::invalid_argument("squeeze_operator: r must be finite");
  const int d = cutoff.fock_dim();
  // Generator (r/2)(a_dag^2 - a^2) is real antisymmetric; Pade
  // scaling-and-squaring keeps the truncated exponential orthogonal to
  // rounding, up to genuine cutoff leakage.
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(d, d);
  for (int n = 0; n + 2 < d; ++n) {
    double c = 0.5 * r * std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    gen(n + 2, n) = c;
    gen(n, n + 2) = -c;
  }
  Eigen::MatrixXd u = gen.exp();
  OperatorMatrix out(DenseMatrix(u.cast<Complex>()), 1, d);
  out.truncation_warning =
      !cutoff_adequate_for_squeeze(r, cutoff.n_max) || out.unitarity_defect() > 1e-8;
  return out;
}

StateVector displaced_squeezed_state(double alpha, double r, FockCutoff cutoff) {
  if (!std::isfinite(r) || !std::isfinite(alpha)) {
    throw std::invalid_argument("displaced_squeezed_state: parameters must be finite");
  }
  const int d = cutoff.fock_dim();
  // (a cosh r - a_dag sinh r)|psi> = alpha e^{-r}|psi> gives the two-term
  // recurrence below; amplitudes are rescaled on the fly to avoid overflow at
  // large displacement and normalized at the end.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
  c[0] = 1.0;
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  const double rhs = alpha * std::exp(-r);
  for (int n = 0; n + 1 < d; ++n) {
    double prev = n > 0 ? c[n - 1] : 0.0;
    c[n + 1] = (rhs * c[n] + sh * std::sqrt(static_cast<double>(n)) * prev) /
               (ch * std::sqrt(static_cast<double>(n + 1)));
    if (std::abs(c[n + 1]) > 1e140) c.head(n + 2) *= 1e-140;
  }
  c /= c.norm();

  StateVector out(c.cast<Complex>(), 1, d);
  double tail = c[d - 1] * c[d - 1] + (d > 1 ? c[d - 2] * c[d - 2] : 0.0);
  out.truncation_warning = tail > kTailTolerance || !cutoff_adequate_for_squeeze(r, cutoff.n_max);
  return out;
}

StateVector squeezed_vacuum(double r, FockCutoff cutoff) {
  return displaced_squeezed_state(0.0, r, cutoff);
}

}  // namespace qrm2
