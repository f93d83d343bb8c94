#pragma once

#include "qrm2/types.hpp"

#include <vector>

namespace qrm2 {

// Two-qubit reduced density matrix in the basis {uu, ud, du, dd}.
struct TwoQubitDensity {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();

  double hermiticity_defect() const;
  double trace_defect() const;
  double min_eigenvalue() const;
  // Hermitian within 1e-12, unit trace within 1e-10, eigenvalues >= -1e-10.
  void validate() const;
};

// Promote a sector-basis state (qubit_dim = 2) to the full basis, mapping
// (s0, s1) onto (uu, dd) for Plus and (ud, du) for Minus.
StateVector embed_sector_state(const StateVector& psi, SectorLabel s);

// rho[q, q'] = sum_n psi[q, n] conj(psi[q', n]); requires qubit_dim = 4.
TwoQubitDensity partial_trace_boson(const StateVector& psi);

// Wootters concurrence C = max(0, mu1 - mu2 - mu3 - mu4), where mu_i are the
// descending square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
double concurrence(const TwoQubitDensity& rho);

struct Magnetization {
  double mean = 0.0;
  double mean_square = 0.0;
};

// Moments of (s1z + s2z)/2; requires qubit_dim = 4.
Magnetization magnetization(const StateVector& psi);

double mean_photon(const StateVector& psi);

double state_fidelity(const StateVector& a, const StateVector& b);  // |<a|b>|^2

// ||P b||^2 with P the projector onto span(basis_states); the span must be
// orthonormal (as eigensolver outputs are).
double subspace_fidelity(const std::vector<StateVector>& span, const StateVector& b);

}  // namespace qrm2
