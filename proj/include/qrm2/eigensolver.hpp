#pragma once

#include "qrm2/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace qrm2 {

enum class EigenMethod { Auto, Dense, Lanczos };

struct EigenResult {
  std::vector<double> eigenvalues;        // ascending, length k
  std::vector<StateVector> eigenvectors;  // orthonormal, matching order
  FockCutoff cutoff_used{1};
  std::vector<double> residual_norms;  // ||H v - E v||_2 per pair
  bool converged = false;
  int iterations = 0;  // block iterations of the iterative path, 0 for dense
};

struct SolveOptions {
  EigenMethod method = EigenMethod::Auto;
  std::uint64_t seed = 12345;  // start-block RNG of the iterative path
  int max_basis = 600;         // basis-size cap of the iterative path
};

// k algebraically smallest eigenpairs of a Hermitian matrix. Auto uses a full
// dense decomposition up to dimension kDenseLimit and block Lanczos with full
// reorthogonalization above. converged guarantees residuals <= min(tol, 1e-8).
EigenResult lowest_eigenpairs(const OperatorMatrix& H, int k, double tol = 1e-8,
                              const SolveOptions& opts = {});

using HamiltonianBuilder = std::function<OperatorMatrix(FockCutoff)>;

struct LadderStep {
  int n_max = 0;
  std::vector<double> eigenvalues;
  double max_delta = 0.0;  // NaN on the first rung
};

struct ConvergenceStudy {
  std::vector<LadderStep> steps;
  EigenResult result;
};

// Doubles n_max from n_start until the k lowest eigenvalues each move less
// than energy_tol between successive rungs (energy_tol <= 0 selects the
// default 1e-9 * max(1, |E0|)), or until n_cap is reached, in which case
// converged = false. The last rung is clamped to n_cap.
ConvergenceStudy converge_cutoff_study(const HamiltonianBuilder& builder, int k = 2,
                                       double energy_tol = 0.0, int n_start = 16,
                                       int n_cap = 4096, const SolveOptions& opts = {});

EigenResult converge_cutoff(const HamiltonianBuilder& builder, int k = 2,
                            double energy_tol = 0.0, int n_start = 16,
                            int n_cap = 4096, const SolveOptions& opts = {});

}  // namespace qrm2
