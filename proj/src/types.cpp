#include "qrm2/types.hpp"

#include <cmath>
#include <stdexcept>

namespace qrm2 {

std::string to_string(SectorLabel s) {
  return s == SectorLabel::Plus ? "plus" : "minus";
}

std::string to_string(PhaseLabel p) {
  return p == PhaseLabel::Normal ? "normal" : "superradiant";
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::Upper: return "upper";
    case Branch::Lower: return "lower";
    default: return "n/a";
  }
}

FockCutoff::FockCutoff(int n_max_) : n_max(n_max_) {
  if (n_max < 1) {
    throw std::invalid_argument("FockCutoff: n_max must be >= 1, got " +
                                std::to_string(n_max));
  }
}

std::vector<std::string> make_basis_labels(int qubit_dim, int fock_dim) {
  static const std::vector<std::vector<std::string>> tags = {
      {""}, {"s0", "s1"}, {"uu", "ud", "du", "dd"}};
  int tag_index = qubit_dim == 1 ? 0 : qubit_dim == 2 ? 1 : 2;
  if (qubit_dim != 1 && qubit_dim != 2 && qubit_dim != 4) {
    throw std::invalid_argument("basis labels: qubit_dim must be 1, 2 or 4");
  }
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(qubit_dim) * fock_dim);
  for (const auto& tag : tags[tag_index]) {
    for (int n = 0; n < fock_dim; ++n) {
      labels.push_back(tag.empty() ? std::to_string(n) : tag + ":" + std::to_string(n));
    }
  }
  return labels;
}

namespace {

void check_dims(Eigen::Index dim, int qubit_dim, int fock_dim) {
  if (fock_dim < 2 || (qubit_dim != 1 && qubit_dim != 2 && qubit_dim != 4) ||
      dim != static_cast<Eigen::Index>(qubit_dim) * fock_dim) {
    throw std::invalid_argument("OperatorMatrix: dimension " + std::to_string(dim) +
                                " does not factor as qubit_dim " +
                                std::to_string(qubit_dim) + " x fock_dim " +
                                std::to_string(fock_dim));
  }
}

}  // namespace

OperatorMatrix::OperatorMatrix(DenseMatrix entries, int qubit_dim, int fock_dim)
    : m_(std::move(entries)), qubit_dim_(qubit_dim), fock_dim_(fock_dim) {
  const auto& m = std::get<DenseMatrix>(m_);
  if (m.rows() != m.cols()) throw std::invalid_argument("OperatorMatrix: not square");
  dim_ = m.rows();
  check_dims(dim_, qubit_dim_, fock_dim_);
}

OperatorMatrix::OperatorMatrix(SparseMatrix entries, int qubit_dim, int fock_dim)
    : m_(std::move(entries)), qubit_dim_(qubit_dim), fock_dim_(fock_dim) {
  auto& m = std::get<SparseMatrix>(m_);
  if (m.rows() != m.cols()) throw std::invalid_argument("OperatorMatrix: not square");
  m.makeCompressed();
  dim_ = m.rows();
  check_dims(dim_, qubit_dim_, fock_dim_);
}

OperatorMatrix OperatorMatrix::from_triplets(const std::vector<Triplet>& entries,
                                             int qubit_dim, int fock_dim) {
  Eigen::Index dim = static_cast<Eigen::Index>(qubit_dim) * fock_dim;
  if (dim <= kDenseLimit) {
    DenseMatrix m = DenseMatrix::Zero(dim, dim);
    for (const auto& t : entries) m(t.row(), t.col()) += t.value();
    return OperatorMatrix(std::move(m), qubit_dim, fock_dim);
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(entries.begin(), entries.end());
  return OperatorMatrix(std::move(m), qubit_dim, fock_dim);
}

bool OperatorMatrix::is_sparse() const {
  return std::holds_alternative<SparseMatrix>(m_);
}

bool OperatorMatrix::is_real() const {
  if (is_sparse()) {
    const auto& m = std::get<SparseMatrix>(m_);
    for (int i = 0; i < m.outerSize(); ++i) {
      for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
        if (it.value().imag() != 0.0) return false;
      }
    }
    return true;
  }
  return std::get<DenseMatrix>(m_).imag().cwiseAbs().maxCoeff() == 0.0;
}

const DenseMatrix& OperatorMatrix::dense_ref() const {
  if (is_sparse()) throw std::logic_error("OperatorMatrix: sparse storage, use to_dense()");
  return std::get<DenseMatrix>(m_);
}

const SparseMatrix& OperatorMatrix::sparse_ref() const {
  if (!is_sparse()) throw std::logic_error("OperatorMatrix: dense storage");
  return std::get<SparseMatrix>(m_);
}

DenseMatrix OperatorMatrix::to_dense() const {
  if (is_sparse()) return DenseMatrix(std::get<SparseMatrix>(m_));
  return std::get<DenseMatrix>(m_);
}

Eigen::VectorXcd OperatorMatrix::apply(const Eigen::VectorXcd& v) const {
  if (v.size() != dim_) {
    throw std::invalid_argument("OperatorMatrix::apply: dimension mismatch");
  }
  if (is_sparse()) return std::get<SparseMatrix>(m_) * v;
  return std::get<DenseMatrix>(m_) * v;
}

Complex OperatorMatrix::coeff(Eigen::Index i, Eigen::Index j) const {
  if (is_sparse()) return std::get<SparseMatrix>(m_).coeff(i, j);
  return std::get<DenseMatrix>(m_)(i, j);
}

double OperatorMatrix::hermiticity_defect() const {
  if (is_sparse()) {
    const auto& m = std::get<SparseMatrix>(m_);
    SparseMatrix adj = SparseMatrix(m.adjoint());
    SparseMatrix diff = m - adj;
    double defect = 0.0;
    for (int i = 0; i < diff.outerSize(); ++i) {
      for (SparseMatrix::InnerIterator it(diff, i); it; ++it) {
        defect = std::max(defect, std::abs(it.value()));
      }
    }
    return defect;
  }
  const auto& m = std::get<DenseMatrix>(m_);
  return (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
}

double OperatorMatrix::unitarity_defect() const {
  DenseMatrix u = to_dense();
  DenseMatrix gram = u.adjoint() * u;
  gram.diagonal().array() -= 1.0;
  return gram.cwiseAbs().maxCoeff();
}

std::vector<std::string> OperatorMatrix::basis_labels() const {
  return make_basis_labels(qubit_dim_, fock_dim_);
}

StateVector::StateVector(Eigen::VectorXcd amplitudes_, int qubit_dim_, int fock_dim_)
    : amplitudes(std::move(amplitudes_)), qubit_dim(qubit_dim_), fock_dim(fock_dim_) {
  if (amplitudes.size() != static_cast<Eigen::Index>(qubit_dim) * fock_dim) {
    throw std::invalid_argument("StateVector: dimension does not match basis layout");
  }
}

double StateVector::norm() const { return amplitudes.norm(); }

StateVector StateVector::normalized() const {
  double n = norm();
  if (n == 0.0) throw std::domain_error("StateVector: cannot normalize zero vector");
  StateVector out = *this;
  out.amplitudes /= n;
  return out;
}

Complex StateVector::overlap(const StateVector& other) const {
  if (other.amplitudes.size() != amplitudes.size()) {
    throw std::invalid_argument("StateVector::overlap: dimension mismatch");
  }
  return amplitudes.dot(other.amplitudes);  // conjugates this
}

std::vector<std::string> StateVector::basis_labels() const {
  return make_basis_labels(qubit_dim, fock_dim);
}

}  // namespace qrm2
