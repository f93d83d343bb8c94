#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace qrm2 {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<Complex>;

// Matrices at or below this dimension are stored dense; larger ones use CSR.
inline constexpr Eigen::Index kDenseLimit = 2000;

enum class SectorLabel { Plus, Minus };
enum class PhaseLabel { Normal, Superradiant };
enum class Branch { Upper, Lower, NotApplicable };

std::string to_string(SectorLabel s);
std::string to_string(PhaseLabel p);
std::string to_string(Branch b);

// Truncated single-mode Fock space keeping occupations 0..n_max.
struct FockCutoff {
  explicit FockCutoff(int n_max_);
  int n_max;
  int fock_dim() const { return n_max + 1; }
};

// Ordered basis tags. qubit_dim selects the qubit factor: 1 boson-only, 2 one
// parity sector (levels s0, s1), 4 the two-qubit basis {uu, ud, du, dd}.
// The index layout is qubit-major: index = qubit_state * fock_dim + n.
std::vector<std::string> make_basis_labels(int qubit_dim, int fock_dim);

class OperatorMatrix {
 public:
  OperatorMatrix(DenseMatrix entries, int qubit_dim, int fock_dim);
  OperatorMatrix(SparseMatrix entries, int qubit_dim, int fock_dim);

  // Chooses dense or CSR storage from the dimension.
  static OperatorMatrix from_triplets(const std::vector<Triplet>& entries,
                                      int qubit_dim, int fock_dim);

  Eigen::Index dim() const { return dim_; }
  int qubit_dim() const { return qubit_dim_; }
  int fock_dim() const { return fock_dim_; }
  bool is_sparse() const;
  // True when every stored entry has zero imaginary part.
  bool is_real() const;

  const DenseMatrix& dense_ref() const;    // throws when sparse
  const SparseMatrix& sparse_ref() const;  // throws when dense
  DenseMatrix to_dense() const;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  Complex coeff(Eigen::Index i, Eigen::Index j) const;

  double hermiticity_defect() const;  // max_ij |A_ij - conj(A_ji)|
  double unitarity_defect() const;    // max-norm of A^dag A - I

  std::vector<std::string> basis_labels() const;

  bool truncation_warning = false;

 private:
  std::variant<DenseMatrix, SparseMatrix> m_;
  Eigen::Index dim_ = 0;
  int qubit_dim_ = 1;
  int fock_dim_ = 0;
};

struct StateVector {
  StateVector() = default;
  StateVector(Eigen::VectorXcd amplitudes_, int qubit_dim_, int fock_dim_);

  Eigen::VectorXcd amplitudes;
  int qubit_dim = 1;
  int fock_dim = 0;
  bool truncation_warning = false;

  Eigen::Index dim() const { return amplitudes.size(); }
  double norm() const;
  StateVector normalized() const;
  Complex overlap(const StateVector& other) const;  // <this|other>
  std::vector<std::string> basis_labels() const;
};

}  // namespace qrm2
