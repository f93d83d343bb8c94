#pragma once

#include "qrm2/types.hpp"

namespace qrm2 {

struct LadderOperators {
  OperatorMatrix a;      // annihilation: a[n-1, n] = sqrt(n)
  OperatorMatrix a_dag;  // exact transpose of a
  OperatorMatrix n_op;   // a_dag a = diag(0..n_max)
  OperatorMatrix x_op;   // a + a_dag
};

LadderOperators ladder_operators(FockCutoff cutoff);

// exp{(r/2)(a_dag^2 - a^2)} on the truncated space. The generator is real
// antisymmetric, so the untruncated exponential is orthogonal; the
// truncation_warning flag is set when the cutoff is too small to preserve that
// (n_max < 3 e^{4|r|}, or unitarity defect above 1e-8).
OperatorMatrix squeeze_operator(double r, FockCutoff cutoff);

// Squeezed vacuum S(r)|0>, the normalized solution of
// (a cosh r - a_dag sinh r) |psi> = 0.
StateVector squeezed_vacuum(double r, FockCutoff cutoff);

// D(alpha) S(r)|0> for real alpha, the normalized solution of
// (a cosh r - a_dag sinh r) |psi> = alpha e^{-r} |psi>.
StateVector displaced_squeezed_state(double alpha, double r, FockCutoff cutoff);

}  // namespace qrm2
