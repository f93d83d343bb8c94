#include "qrm2/model.hpp"

#include <cmath>
#include <stdexcept>

namespace qrm2 {

namespace {

// Qubit-major layout: q in {0:uu, 1:ud, 2:du, 3:dd}, index = q*fock_dim + n.
constexpr double kS1z[4] = {+1.0, +1.0, -1.0, -1.0};
constexpr double kS2z[4] = {+1.0, -1.0, +1.0, -1.0};

void require_positive_gamma(const ModelParams& p, const char* who) {
  if (p.gamma <= 0.0) {
    throw std::domain_error(std::string(who) +
                            ": control parameter g requires gamma > 0");
  }
}

}  // namespace

void ModelParams::validate() const {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("ModelParams: omega must be positive");
  }
  if (gamma < 0.0 && !allow_nonpositive_gamma) {
    throw std::invalid_argument(
        "ModelParams: negative gamma requires allow_nonpositive_gamma");
  }
}

SectorParams derive_sector_params(const ModelParams& p) {
  p.validate();
  SectorParams s;
  s.eps_plus = p.eps1 + p.eps2;
  s.eps_minus = p.eps1 - p.eps2;
  s.lam_plus = p.lam1 + p.lam2;
  s.lam_minus = p.lam1 - p.lam2;
  if (p.gamma > 0.0) {
    double root = std::sqrt(p.omega * p.gamma);
    s.g_plus = std::sqrt(2.0) * s.lam_plus / root;
    s.g_minus = std::sqrt(2.0) * s.lam_minus / root;
  }
  return s;
}

ModelParams counter_biased_params(double omega, double gamma, double eps, double g) {
  ModelParams p;
  p.omega = omega;
  p.gamma = gamma;
  p.eps1 = eps / 2.0;
  p.eps2 = -eps / 2.0;
  p.validate();
  require_positive_gamma(p, "counter_biased_params");
  double lam_plus = g * std::sqrt(omega * gamma / 2.0);
  p.lam1 = p.lam2 = lam_plus / 2.0;
  return p;
}

ModelParams unbiased_params(double omega, double gamma, double lambda_ratio, double g) {
  if (!(lambda_ratio > 1.0)) {
    throw std::invalid_argument(
        "unbiased_params: lambda_ratio must exceed 1 so that lam_minus > 0");
  }
  ModelParams p;
  p.omega = omega;
  p.gamma = gamma;
  p.validate();
  require_positive_gamma(p, "unbiased_params");
  double lam_minus = g * std::sqrt(omega * gamma / 2.0);
  p.lam2 = lam_minus / (lambda_ratio - 1.0);
  p.lam1 = lambda_ratio * p.lam2;
  return p;
}

OperatorMatrix build_full_hamiltonian(const ModelParams& p, FockCutoff cutoff) {
  p.validate();
  const int f = cutoff.fock_dim();
  std::vector<Triplet> t;
  t.reserve(static_cast<size_t>(f) * 16);
  for (int q = 0; q < 4; ++q) {
    const int base = q * f;
    const double diag_qubit = p.eps1 * kS1z[q] + p.eps2 * kS2z[q];
    const double lam_q = p.lam1 * kS1z[q] + p.lam2 * kS2z[q];
    for (int n = 0; n < f; ++n) {
      t.emplace_back(base + n, base + n, p.omega * n + diag_qubit);
    }
    for (int n = 1; n < f; ++n) {
      double x = lam_q * std::sqrt(static_cast<double>(n));
      t.emplace_back(base + n - 1, base + n, x);
      t.emplace_back(base + n, base + n - 1, x);
    }
    // s1x s2x flips both qubits: uu<->dd and ud<->du.
    const int partner = 3 - q;
    for (int n = 0; n < f; ++n) {
      t.emplace_back(base + n, partner * f + n, p.gamma);
    }
  }
  return OperatorMatrix::from_triplets(t, 4, f);
}

OperatorMatrix build_sector_hamiltonian(const ModelParams& p, SectorLabel s,
                                        FockCutoff cutoff, double sigma_z_bias) {
  SectorParams sp = derive_sector_params(p);
  const double eps_s = (s == SectorLabel::Plus ? sp.eps_plus : sp.eps_minus) + sigma_z_bias;
  const double lam_s = s == SectorLabel::Plus ? sp.lam_plus : sp.lam_minus;
  const int f = cutoff.fock_dim();
  std::vector<Triplet> t;
  t.reserve(static_cast<size_t>(f) * 8);
  for (int q = 0; q < 2; ++q) {
    const int base = q * f;
    const double sz = q == 0 ? 1.0 : -1.0;
    for (int n = 0; n < f; ++n) {
      t.emplace_back(base + n, base + n, p.omega * n + eps_s * sz);
      t.emplace_back(base + n, (1 - q) * f + n, p.gamma);
    }
    for (int n = 1; n < f; ++n) {
      double x = lam_s * sz * std::sqrt(static_cast<double>(n));
      t.emplace_back(base + n - 1, base + n, x);
      t.emplace_back(base + n, base + n - 1, x);
    }
  }
  return OperatorMatrix::from_triplets(t, 2, f);
}

std::vector<Eigen::Index> parity_permutation(FockCutoff cutoff) {
  const Eigen::Index f = cutoff.fock_dim();
  // New order groups the Plus sector (uu, dd) ahead of Minus (ud, du).
  const Eigen::Index old_block[4] = {0, 3, 1, 2};
  std::vector<Eigen::Index> perm(4 * f);
  for (Eigen::Index b = 0; b < 4; ++b) {
    for (Eigen::Index n = 0; n < f; ++n) {
      perm[b * f + n] = old_block[b] * f + n;
    }
  }
  return perm;
}

OperatorMatrix build_quadratic_effective(const ModelParams& p, PhaseLabel phase,
                                         FockCutoff cutoff) {
  p.validate();
  require_positive_gamma(p, "build_quadratic_effective");
  SectorParams sp = derive_sector_params(p);
  const double g = *sp.g_plus;
  double x2_coeff, offset;
  if (phase == PhaseLabel::Normal) {
    if (!(g < 1.0)) {
      throw std::domain_error(
          "build_quadratic_effective: Normal phase requires g_plus < 1 "
          "(the quadratic form is unbounded below otherwise)");
    }
    x2_coeff = p.omega * g * g / 4.0;
    offset = p.gamma;
  } else {
    if (!(g > 1.0)) {
      throw std::domain_error(
          "build_quadratic_effective: Superradiant phase requires g_plus > 1");
    }
    x2_coeff = p.omega / (4.0 * g * g * g * g);
    offset = p.gamma * (g * g + 1.0 / (g * g)) / 2.0;
  }
  // x^2 = a^2 + a_dag^2 + 2 a_dag a + 1.
  const int f = cutoff.fock_dim();
  std::vector<Triplet> t;
  t.reserve(static_cast<size_t>(f) * 3);
  for (int n = 0; n < f; ++n) {
    t.emplace_back(n, n, p.omega * n - x2_coeff * (2.0 * n + 1.0) - offset);
  }
  for (int n = 0; n + 2 < f; ++n) {
    double v = -x2_coeff * std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    t.emplace_back(n, n + 2, v);
    t.emplace_back(n + 2, n, v);
  }
  return OperatorMatrix::from_triplets(t, 1, f);
}

}  // namespace qrm2
