#pragma once

#include "qrm2/types.hpp"

#include <optional>
#include <vector>

namespace qrm2 {

// Parameters of
//   H = omega a^dag a + eps1 s1z + eps2 s2z + gamma s1x s2x
//       + (lam1 s1z + lam2 s2z)(a + a^dag).
struct ModelParams {
  double omega = 1.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double gamma = 0.0;
  double lam1 = 0.0;
  double lam2 = 0.0;
  // Everything involving the control parameter g assumes omega*gamma > 0;
  // negative gamma is accepted only when this flag is set.
  bool allow_nonpositive_gamma = false;

  void validate() const;
};

struct SectorParams {
  double eps_plus = 0.0;
  double eps_minus = 0.0;
  double lam_plus = 0.0;
  double lam_minus = 0.0;
  // sqrt(2) lam_pm / sqrt(omega gamma); empty when gamma <= 0.
  std::optional<double> g_plus;
  std::optional<double> g_minus;
};

SectorParams derive_sector_params(const ModelParams& p);

// Counter-biased configuration eps1 = -eps2 = eps/2, lam1 = lam2, with the
// couplings back-solved so that g_plus equals the requested g.
ModelParams counter_biased_params(double omega, double gamma, double eps, double g);

// Unbiased configuration eps1 = eps2 = 0 with lam1/lam2 = lambda_ratio (> 1),
// couplings back-solved so that g_minus equals the requested g.
ModelParams unbiased_params(double omega, double gamma, double lambda_ratio, double g);

// 4(n_max+1)-dimensional matrix in the qubit-major basis
// {uu, ud, du, dd} x {|0>..|n_max>}.
OperatorMatrix build_full_hamiltonian(const ModelParams& p, FockCutoff cutoff);

// 2(n_max+1)-dimensional sector block
//   omega a^dag a + eps_s sz + gamma sx + lam_s (a + a^dag) sz
// in the basis {s0, s1} x Fock, where (s0, s1) = (uu, dd) for Plus and
// (ud, du) for Minus. sigma_z_bias adds bias*sz, the explicit
// symmetry-breaking term the sweep uses to select a branch.
OperatorMatrix build_sector_hamiltonian(const ModelParams& p, SectorLabel s,
                                        FockCutoff cutoff, double sigma_z_bias = 0.0);

// Index map placing the Plus-sector block first: perm[i_new] = i_old, so that
// reindexing the full Hamiltonian gives [H_plus 0; 0 H_minus] exactly.
std::vector<Eigen::Index> parity_permutation(FockCutoff cutoff);

// Boson-only quadratic forms with x = a + a^dag and g = g_plus:
//   Normal        omega a^dag a - (omega g^2/4) x^2 - gamma
//   Superradiant  omega a^dag a - (omega/(4 g^4)) x^2 - gamma (g^2 + g^-2)/2
OperatorMatrix build_quadratic_effective(const ModelParams& p, PhaseLabel phase,
                                         FockCutoff cutoff);

}  // namespace qrm2
