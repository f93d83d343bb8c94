#include "qrm2/eigensolver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

namespace qrm2 {

namespace {

// converged = true additionally guarantees residuals at or below this.
constexpr double kResidualCeiling = 1e-8;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
void fill_random(Mat<Scalar>& m, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if constexpr (std::is_same_v<Scalar, double>) {
        m(i, j) = dist(rng);
      } else {
        m(i, j) = Scalar(dist(rng), dist(rng));
      }
    }
  }
}

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct LanczosOutput {
  std::vector<double> values;
  Mat<Scalar> vectors;
  bool converged = false;
  int iterations = 0;
};

// Lanczos with full reorthogonalization, restarted with deflation.  Each run
// grows a single-vector Krylov chain orthogonal to everything locked so far;
// the Rayleigh-Ritz step uses the explicitly projected matrix Q^H A Q
// (accumulated column by column from the stored products A Q) and convergence
// is declared from true residual norms ||A y - theta y||, so restarts cannot
// fool the bookkeeping.  A single chain cannot represent the second copy of a
// (near-)degenerate eigenvalue -- the restart supplies it from the deflated
// complement, where it is a simple extremal eigenvalue again.  Running one
// chain at a time keeps the full polynomial degree of the basis budget, which
// a block iteration would divide by the block size.
//
// When `enrich` is set (typically x -> (A - sigma)^{-1} x), the chain advances
// through it instead of the plain Lanczos residual.  Rayleigh-Ritz and the
// residual checks still use A itself, so a poorly placed shift only slows the
// subspace down, it cannot produce a wrong answer.
template <typename Scalar, typename ApplyFn>
LanczosOutput<Scalar> deflated_lanczos(const ApplyFn& apply, Eigen::Index dim, int k,
                                       double target, const SolveOptions& opts,
                                       const std::function<Mat<Scalar>(const Mat<Scalar>&)>&
                                           enrich = {}) {
  const Eigen::Index kk = std::min<Eigen::Index>(k, dim);
  const Eigen::Index cap =
      std::min<Eigen::Index>(std::max<Eigen::Index>(opts.max_basis, kk + 4), dim);
  const Eigen::Index max_locked = std::min<Eigen::Index>(kk + 5, dim);
  std::mt19937_64 rng(opts.seed);

  Mat<Scalar> basis(dim, cap);  // locked prefix + current chain, orthonormal
  Mat<Scalar> aq(dim, cap);     // A * basis, same column order
  Mat<Scalar> T(cap, cap);      // basis^H A basis
  Mat<Scalar> locked(dim, max_locked);
  Mat<Scalar> locked_aq(dim, max_locked);
  std::vector<double> locked_vals(static_cast<size_t>(max_locked), 0.0);
  Eigen::Index locked_n = 0;

  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> small_es;
  double scale_est = 1.0;
  LanczosOutput<Scalar> out;

  // How many of the lowest Ritz pairs, in order, meet the residual target.
  // A residual that small proves the pair sits next to a true eigenpair; it
  // does not by itself prove no lower eigenvalue was skipped, which is what
  // the verification runs below are for.
  const auto converged_prefix = [&](Eigen::Index cols, Eigen::Index limit) {
    Eigen::Index good = 0;
    while (good < std::min(limit, cols)) {
      const double theta = small_es.eigenvalues()[good];
      const Vec<Scalar> s = small_es.eigenvectors().col(good);
      const Vec<Scalar> y = basis.leftCols(cols) * s;
      const Vec<Scalar> ay = aq.leftCols(cols) * s;
      if ((ay - theta * y).norm() > target) break;
      ++good;
    }
    return good;
  };

  const auto assemble = [&](Eigen::Index cols, bool converged) {
    const Eigen::Index take = std::min<Eigen::Index>(kk, cols);
    out.vectors = basis.leftCols(cols) * small_es.eigenvectors().leftCols(take);
    out.values.assign(small_es.eigenvalues().data(), small_es.eigenvalues().data() + take);
    out.converged = converged;
  };

  const int max_runs = static_cast<int>(kk) + 5;
  for (int run = 0; run < max_runs; ++run) {
    Eigen::Index cols = locked_n;
    basis.leftCols(locked_n) = locked.leftCols(locked_n);
    aq.leftCols(locked_n) = locked_aq.leftCols(locked_n);
    T.setZero();
    if (locked_n > 0) {
      T.topLeftCorner(locked_n, locked_n) =
          basis.leftCols(locked_n).adjoint() * aq.leftCols(locked_n);
    }

    // A run that starts with fewer than kk locked pairs works on converging
    // the kk lowest combined Ritz pairs.  Once kk pairs are locked, runs turn
    // into verifications: a fresh random chain, deflated against everything
    // accepted, must converge one pair beyond the locked set.  That pair is
    // the minimum over the unexplored complement; if it stays at or above our
    // kk-th value, nothing below was skipped and the answer is certified.  If
    // it lands below, a degenerate copy was missing: lock it and verify again.
    const bool verifying = locked_n >= kk;
    const Eigen::Index goal = verifying ? locked_n + 1 : kk;
    const double old_top = verifying ? locked_vals[kk - 1] : 0.0;

    // Next chain vector, orthogonal to every accepted column.  A candidate
    // whose orthogonal component collapses carries no new direction and is
    // replaced by a fresh random draw rather than divided by a tiny norm,
    // which would inject a near-duplicate of the basis.
    const auto next_direction = [&](Vec<Scalar> v) {
      for (int attempt = 0; attempt < 8; ++attempt) {
        const double before = v.norm();
        if (before > 1e-280 * scale_est) {
          for (int pass = 0; pass < 2; ++pass) {
            if (cols > 0) {
              auto Q = basis.leftCols(cols);
              v.noalias() -= Q * (Q.adjoint() * v).eval();
            }
          }
          if (v.norm() > 1e-8 * before) break;
        }
        Mat<Scalar> fresh(dim, 1);
        fill_random(fresh, rng);
        v = fresh.col(0);
      }
      return Vec<Scalar>(v / v.norm());
    };

    Mat<Scalar> seed(dim, 1);
    fill_random(seed, rng);
    Vec<Scalar> x = next_direction(seed.col(0));

    while (cols < cap) {
      const Eigen::Index p = cols;
      basis.col(p) = x;
      cols += 1;
      ++out.iterations;

      Vec<Scalar> w = apply(Mat<Scalar>(basis.col(p)));
      aq.col(p) = w;
      scale_est = std::max(scale_est, w.norm());

      Vec<Scalar> tcol = basis.leftCols(cols).adjoint() * w;
      T.block(0, p, cols, 1) = tcol;
      T.block(p, 0, 1, cols) = tcol.adjoint();
      T(p, p) = Scalar(std::real(tcol[p]));

      const bool last = cols == cap;
      // small problems are checked every step, large ones on a stride
      if (cols >= goal && (cols <= 128 || last || out.iterations % 16 == 0)) {
        small_es.compute(T.topLeftCorner(cols, cols));
        if (converged_prefix(cols, goal) >= goal) break;
      }
      if (last) break;

      Vec<Scalar> d;
      if (enrich) {
        d = enrich(Mat<Scalar>(basis.col(p)));
        if (!d.allFinite()) d = w - basis.leftCols(cols) * tcol;
      } else {
        d = w - basis.leftCols(cols) * tcol;  // chain-step residual
      }
      x = next_direction(std::move(d));
    }

    small_es.compute(T.topLeftCorner(cols, cols));
    const Eigen::Index good = converged_prefix(cols, std::min(max_locked, cols));

    if (cols == dim) {
      // the combined space is the full space, so the Ritz pairs are exact
      assemble(cols, good >= kk);
      return out;
    }
    if (verifying && good >= locked_n + 1) {
      // splits far below this margin are degenerate for every practical
      // purpose; treating them as copies keeps the verification loop finite
      const double margin = std::max(1e3 * target, 1e-9 * scale_est);
      if (small_es.eigenvalues()[kk - 1] >= old_top - margin) {
        assemble(cols, true);
        return out;
      }
    } else if (good <= locked_n) {
      assemble(cols, false);  // no progress within the basis budget
      return out;
    }

    const Eigen::Index new_locked = std::min(good, max_locked);
    for (Eigen::Index i = 0; i < new_locked; ++i) {
      const Vec<Scalar> s = small_es.eigenvectors().col(i);
      locked.col(i) = basis.leftCols(cols) * s;
      locked_aq.col(i) = aq.leftCols(cols) * s;
      locked_vals[static_cast<size_t>(i)] = small_es.eigenvalues()[i];
    }
    locked_n = new_locked;
  }

  // Run budget exhausted without certification; report the locked pairs
  // honestly as unconverged.
  Eigen::Index cols = locked_n;
  basis.leftCols(locked_n) = locked.leftCols(locked_n);
  aq.leftCols(locked_n) = locked_aq.leftCols(locked_n);
  T.setZero();
  T.topLeftCorner(locked_n, locked_n) =
      basis.leftCols(locked_n).adjoint() * aq.leftCols(locked_n);
  small_es.compute(T.topLeftCorner(cols, cols));
  assemble(cols, false);
  return out;
}

// Sparse operators get shift-invert enrichment: a short plain chain locates
// the bottom of the spectrum, then Krylov runs on (A - sigma)^{-1} whose
// factorization is cheap for these nearly banded matrices.  That keeps the
// basis small even when the gap-to-spread ratio of A itself is poor, as it is
// for strongly coupled Hamiltonians at large cutoffs.  If the first pass does
// not converge, the shift is refitted from its own (much better) Ritz value.
// A failed factorization just falls back to the plain chain.
template <typename Scalar>
LanczosOutput<Scalar> sparse_lanczos(const Eigen::SparseMatrix<Scalar>& a, Eigen::Index dim,
                                     int k, double target, const SolveOptions& opts) {
  const auto apply = [&a](const Mat<Scalar>& x) { return Mat<Scalar>(a * x); };

  SolveOptions pre_opts = opts;
  pre_opts.max_basis = 120;
  LanczosOutput<Scalar> pre = deflated_lanczos<Scalar>(apply, dim, 1, 0.0, pre_opts);
  if (pre.values.empty()) return deflated_lanczos<Scalar>(apply, dim, k, target, opts);

  Eigen::SparseMatrix<Scalar> id(dim, dim);
  id.setIdentity();
  double sigma = pre.values[0];
  LanczosOutput<Scalar> out;
  for (int attempt = 0; attempt < 2; ++attempt) {
    // below the Ritz value, which itself sits at or above the true minimum
    sigma -= 1e-6 * std::max(1.0, std::abs(sigma));
    Eigen::SparseMatrix<Scalar> shifted = a - Scalar(sigma) * id;
    auto lu = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<Scalar>>>();
    lu->compute(shifted);
    std::function<Mat<Scalar>(const Mat<Scalar>&)> enrich;
    if (lu->info() == Eigen::Success) {
      enrich = [lu](const Mat<Scalar>& x) { return Mat<Scalar>(lu->solve(x)); };
    }
    out = deflated_lanczos<Scalar>(apply, dim, k, target, opts, enrich);
    if (out.converged || out.values.empty() || !enrich) break;
    sigma = out.values[0];
  }
  return out;
}

Eigen::SparseMatrix<double> real_part(const SparseMatrix& m) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(m.nonZeros());
  for (int i = 0; i < m.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
      if (it.value().real() != 0.0) t.emplace_back(it.row(), it.col(), it.value().real());
    }
  }
  Eigen::SparseMatrix<double> out(m.rows(), m.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

}  // namespace

EigenResult lowest_eigenpairs(const OperatorMatrix& H, int k, double tol,
                              const SolveOptions& opts) {
  const Eigen::Index dim = H.dim();
  if (k < 1 || k > dim) {
    throw std::invalid_argument("lowest_eigenpairs: need 1 <= k <= dim");
  }
  if (H.hermiticity_defect() > 1e-10) {
    throw std::invalid_argument(
        "lowest_eigenpairs: matrix is not Hermitian (symmetry defect > 1e-10)");
  }
  const double target = tol > 0.0 ? std::min(tol, kResidualCeiling) : kResidualCeiling;

  EigenMethod method = opts.method;
  if (method == EigenMethod::Auto) {
    method = dim <= kDenseLimit ? EigenMethod::Dense : EigenMethod::Lanczos;
  }
  // The iterative path needs room around the target block to make progress.
  if (method == EigenMethod::Lanczos && (dim <= 4 * k + 32 || k > 64)) {
    method = EigenMethod::Dense;
  }

  const bool real = H.is_real();
  EigenResult res;
  res.cutoff_used = FockCutoff(H.fock_dim() - 1);

  DenseMatrix V;
  bool iterative_converged = true;
  if (method == EigenMethod::Dense) {
    if (real) {
      Eigen::MatrixXd a = H.to_dense().real();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
      res.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
      V = es.eigenvectors().leftCols(k).cast<Complex>();
    } else {
      Eigen::SelfAdjointEigenSolver<DenseMatrix> es(H.to_dense());
      res.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
      V = es.eigenvectors().leftCols(k);
    }
  } else {
    if (real) {
      LanczosOutput<double> out;
      if (H.is_sparse()) {
        Eigen::SparseMatrix<double> a = real_part(H.sparse_ref());
        out = sparse_lanczos<double>(a, dim, k, target, opts);
      } else {
        Eigen::MatrixXd a = H.dense_ref().real();
        out = deflated_lanczos<double>(
            [&a](const Mat<double>& x) { return Mat<double>(a * x); }, dim, k, target, opts);
      }
      res.eigenvalues = std::move(out.values);
      V = out.vectors.cast<Complex>();
      res.iterations = out.iterations;
      iterative_converged = out.converged;
    } else {
      LanczosOutput<Complex> out;
      if (H.is_sparse()) {
        out = sparse_lanczos<Complex>(H.sparse_ref(), dim, k, target, opts);
      } else {
        const DenseMatrix& a = H.dense_ref();
        out = deflated_lanczos<Complex>(
            [&a](const Mat<Complex>& x) { return Mat<Complex>(a * x); }, dim, k, target, opts);
      }
      res.eigenvalues = std::move(out.values);
      V = std::move(out.vectors);
      res.iterations = out.iterations;
      iterative_converged = out.converged;
    }
  }

  // Deterministic phase: rotate each vector so its largest component is real
  // and positive, then report the exact residual.
  double max_residual = 0.0;
  for (int i = 0; i < k && i < static_cast<int>(res.eigenvalues.size()); ++i) {
    Eigen::VectorXcd v = V.col(i);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    Complex phase = v[imax];
    if (std::abs(phase) > 0.0) v *= std::conj(phase) / std::abs(phase);
    v /= v.norm();
    double residual = (H.apply(v) - res.eigenvalues[i] * v).norm();
    res.residual_norms.push_back(residual);
    max_residual = std::max(max_residual, residual);
    StateVector sv(std::move(v), H.qubit_dim(), H.fock_dim());
    sv.truncation_warning = H.truncation_warning;
    res.eigenvectors.push_back(std::move(sv));
  }
  res.converged = iterative_converged && max_residual <= kResidualCeiling;
  return res;
}

ConvergenceStudy converge_cutoff_study(const HamiltonianBuilder& builder, int k,
                                       double energy_tol, int n_start, int n_cap,
                                       const SolveOptions& opts) {
  if (n_start < 8) throw std::invalid_argument("converge_cutoff: n_start must be >= 8");
  if (n_cap < n_start) throw std::invalid_argument("converge_cutoff: n_cap must be >= n_start");

  ConvergenceStudy study;
  std::vector<double> prev_vals;
  std::optional<EigenResult> final;
  bool tol_met = false;

  for (int n = n_start;;) {
    EigenResult cur = lowest_eigenpairs(builder(FockCutoff(n)), k, kResidualCeiling, opts);
    double delta = std::numeric_limits<double>::quiet_NaN();
    if (!prev_vals.empty()) {
      delta = 0.0;
      for (size_t i = 0; i < cur.eigenvalues.size() && i < prev_vals.size(); ++i) {
        delta = std::max(delta, std::abs(cur.eigenvalues[i] - prev_vals[i]));
      }
    }
    study.steps.push_back(LadderStep{n, cur.eigenvalues, delta});

    const double tol_eff = energy_tol > 0.0
                               ? energy_tol
                               : 1e-9 * std::max(1.0, std::abs(cur.eigenvalues.at(0)));
    if (!prev_vals.empty() && delta < tol_eff) {
      tol_met = true;
      final = std::move(cur);
      break;
    }
    if (n >= n_cap) {
      final = std::move(cur);
      break;
    }
    prev_vals = cur.eigenvalues;
    n = std::min(2 * n, n_cap);
  }

  final->converged = tol_met && final->converged;
  study.result = std::move(*final);
  return study;
}

EigenResult converge_cutoff(const HamiltonianBuilder& builder, int k, double energy_tol,
                            int n_start, int n_cap, const SolveOptions& opts) {
  return converge_cutoff_study(builder, k, energy_tol, n_start, n_cap, opts).result;
}

}  // namespace qrm2
