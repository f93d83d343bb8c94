#include "qrm2/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrm2 {

double TwoQubitDensity::hermiticity_defect() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double TwoQubitDensity::trace_defect() const {
  return std::abs(rho.trace() - Complex(1.0, 0.0));
}

double TwoQubitDensity::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es((rho + rho.adjoint()) / 2.0);
  return es.eigenvalues().minCoeff();
}

void TwoQubitDensity::validate() const {
  if (hermiticity_defect() > 1e-12) {
    throw std::invalid_argument("density matrix: not Hermitian");
  }
  if (trace_defect() > 1e-10) {
    throw std::invalid_argument("density matrix: trace differs from 1");
  }
  if (min_eigenvalue() < -1e-10) {
    throw std::invalid_argument("density matrix: negative eigenvalue");
  }
}

StateVector embed_sector_state(const StateVector& psi, SectorLabel sector) {
  if (psi.qubit_dim != 2) {
    throw std::invalid_argument("embed_sector_state: expected a two-level sector state");
  }
  const int f = psi.fock_dim;
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4 * f);
  // Sector block order restores the even-parity pair (uu, dd) and the
  // odd-parity pair (ud, du) of the four-level basis.
  const int q0 = sector == SectorLabel::Plus ? 0 : 1;
  const int q1 = sector == SectorLabel::Plus ? 3 : 2;
  amps.segment(q0 * f, f) = psi.amplitudes.head(f);
  amps.segment(q1 * f, f) = psi.amplitudes.tail(f);
  StateVector out(std::move(amps), 4, f);
  out.truncation_warning = psi.truncation_warning;
  return out;
}

TwoQubitDensity partial_trace_boson(const StateVector& psi) {
  if (psi.qubit_dim != 4) {
    throw std::invalid_argument("partial_trace_boson: expected a two-qubit state");
  }
  const int f = psi.fock_dim;
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int q = 0; q < 4; ++q) {
    for (int p = 0; p < 4; ++p) {
      // <q|rho|p> = sum_n c_{qn} conj(c_{pn}); dot() conjugates its left arg.
      rho(q, p) = psi.amplitudes.segment(p * f, f).dot(psi.amplitudes.segment(q * f, f));
    }
  }

  TwoQubitDensity out;
  out.rho = rho;
  return out;
}

double concurrence(const TwoQubitDensity& density) {
  density.validate();
  const Eigen::Matrix4cd& rho = density.rho;
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  // Decompose rho = sum_i v_i v_i^dag with subnormalized eigenvectors; the
  // mu_i are then the singular values of the complex symmetric matrix
  // tau_ij = v_i^T (yy) v_j.  Unlike eigenvalues of the non-Hermitian product
  // rho * (yy rho^* yy), singular values near zero come out with absolute
  // machine accuracy, which the local-unitary invariance of C relies on.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> rho_es(rho);
  Eigen::Matrix4cd v;
  for (int i = 0; i < 4; ++i) {
    v.col(i) = std::sqrt(std::max(0.0, rho_es.eigenvalues()[i])) *
               rho_es.eigenvectors().col(i);
  }
  const Eigen::Matrix4cd tau = v.transpose() * yy * v;
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);

  // singular values arrive sorted in decreasing order
  const auto& mu = svd.singularValues();
  double c = mu[0] - mu[1] - mu[2] - mu[3];
  return std::clamp(c, 0.0, 1.0);
}

Magnetization magnetization(const StateVector& psi) {
  if (psi.qubit_dim != 4) {
    throw std::invalid_argument("magnetization: expected a two-qubit state");
  }
  const int f = psi.fock_dim;
  // (s1z + s2z)/2 weights per qubit level uu, ud, du, dd.
  static constexpr double kMean[4] = {1.0, 0.0, 0.0, -1.0};
  static constexpr double kSquare[4] = {1.0, 0.0, 0.0, 1.0};
  Magnetization out{0.0, 0.0};
  for (int q = 0; q < 4; ++q) {
    const double w = psi.amplitudes.segment(q * f, f).squaredNorm();
    out.mean += kMean[q] * w;
    out.mean_square += kSquare[q] * w;
  }
  return out;
}

double mean_photon(const StateVector& psi) {
  const int f = psi.fock_dim;
  double total = 0.0;
  for (int q = 0; q < psi.qubit_dim; ++q) {
    for (int n = 1; n < f; ++n) {
      total += n * std::norm(psi.amplitudes[q * f + n]);
    }
  }
  return total;
}

double state_fidelity(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  }
  return std::norm(a.overlap(b));
}

double subspace_fidelity(const std::vector<StateVector>& span, const StateVector& b) {
  if (span.empty()) {
    throw std::invalid_argument("subspace_fidelity: empty span");
  }
  double total = 0.0;
  for (const StateVector& v : span) {
    if (v.dim() != b.dim()) {
      throw std::invalid_argument("subspace_fidelity: dimension mismatch");
    }
    total += std::norm(v.overlap(b));
  }
  return std::min(total, 1.0);
}

}  // namespace qrm2
