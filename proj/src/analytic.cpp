#include "qrm2/analytic.hpp"

#include "qrm2/fock.hpp"
#include "qrm2/observables.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qrm2 {

namespace {

void check_phase_domain(PhaseLabel phase, double g) {
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw std::domain_error("closed forms: g must be finite and non-negative");
  }
  if (phase == PhaseLabel::Normal && !(g < 1.0)) {
    throw std::domain_error("closed forms: Normal phase requires g < 1");
  }
  if (phase == PhaseLabel::Superradiant && !(g > 1.0)) {
    throw std::domain_error("closed forms: Superradiant phase requires g > 1");
  }
}

void check_branch(PhaseLabel phase, Branch branch) {
  if (phase == PhaseLabel::Superradiant && branch == Branch::NotApplicable) {
    throw std::invalid_argument(
        "closed forms: the Superradiant ground is two-fold degenerate, pick a branch");
  }
}

}  // namespace

double squeeze_param(PhaseLabel phase, double g) {
  check_phase_domain(phase, g);
  if (phase == PhaseLabel::Normal) return -std::log(1.0 - g * g) / 4.0;
  return -std::log(1.0 - std::pow(g, -4.0)) / 4.0;
}

double ground_energy(PhaseLabel phase, double omega, double gamma, double g) {
  check_phase_domain(phase, g);
  if (!(omega > 0.0) || !(gamma > 0.0)) {
    throw std::domain_error("ground_energy: omega and gamma must be positive");
  }
  if (phase == PhaseLabel::Normal) {
    return omega * (std::sqrt(1.0 - g * g) - 1.0) / 2.0 - gamma;
  }
  const double g2 = g * g;
  return omega * (std::sqrt(1.0 - std::pow(g, -4.0)) - 1.0) / 2.0 -
         gamma * (g2 + 1.0 / g2) / 2.0;
}

double ground_energy(PhaseLabel phase, const ModelParams& p) {
  SectorParams sp = derive_sector_params(p);
  if (!sp.g_plus) throw std::domain_error("ground_energy: g undefined for gamma <= 0");
  return ground_energy(phase, p.omega, p.gamma, *sp.g_plus);
}

MinusSectorGround minus_sector_ground(const ModelParams& p, FockCutoff cutoff) {
  SectorParams sp = derive_sector_params(p);
  const double scale = std::max({1.0, std::abs(p.eps1), std::abs(p.lam1)});
  if (std::abs(sp.eps_plus) > 1e-12 * scale || std::abs(sp.lam_minus) > 1e-12 * scale) {
    throw std::invalid_argument(
        "minus_sector_ground: requires the counter-biased configuration "
        "(eps_plus = 0 and lam_minus = 0)");
  }
  const double eps = sp.eps_minus;
  const double root = std::hypot(eps, p.gamma);
  if (root == 0.0) {
    throw std::domain_error("minus_sector_ground: eps = gamma = 0 is degenerate");
  }
  // Ground of eps*sz + gamma*sx at eigenvalue -root; at eps = 0 this is the
  // singlet-like combination (ud - du)/sqrt(2).
  Eigen::Vector2d spin(p.gamma, -(eps + root));
  spin /= spin.norm();

  const int f = cutoff.fock_dim();
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4 * f);
  amps[1 * f + 0] = spin[0];  // ud, boson vacuum
  amps[2 * f + 0] = spin[1];  // du
  return MinusSectorGround{-root, StateVector(std::move(amps), 4, f)};
}

std::vector<RescaledEnergyPair> rescaled_energies(const ModelParams& p,
                                                  const std::vector<double>& g_grid) {
  p.validate();
  if (!(p.gamma > 0.0)) {
    throw std::domain_error("rescaled_energies: gamma must be positive");
  }
  std::vector<RescaledEnergyPair> out;
  out.reserve(g_grid.size());
  for (double g : g_grid) {
    const double ag = std::abs(g);
    double e_plus = ag <= 1.0 ? -p.omega : -p.omega * (ag * ag + 1.0 / (ag * ag)) / 2.0;
    out.push_back(RescaledEnergyPair{g, e_plus, -p.omega});
  }
  return out;
}

double displacement_amplitude(double g, double gamma_over_omega) {
  if (!(gamma_over_omega > 0.0)) {
    throw std::domain_error("displacement_amplitude: gamma_over_omega must be positive");
  }
  check_phase_domain(PhaseLabel::Superradiant, g);
  return std::sqrt(gamma_over_omega / 2.0 * (g * g - 1.0 / (g * g)));
}

StateVector sector_ground_state(PhaseLabel phase, Branch branch, double g,
                                FockCutoff cutoff, bool displaced,
                                double gamma_over_omega) {
  check_phase_domain(phase, g);
  const int f = cutoff.fock_dim();
  double c0, c1;  // spin amplitudes on (s0, s1)
  StateVector boson(Eigen::VectorXcd::Zero(f), 1, f);
  if (phase == PhaseLabel::Normal) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    c0 = inv_sqrt2;
    c1 = -inv_sqrt2;
    boson = squeezed_vacuum(squeeze_param(phase, g), cutoff);
  } else {
    check_branch(phase, branch);
    const double m = std::sqrt(1.0 - std::pow(g, -4.0));
    const double cu = std::sqrt((1.0 - m) / 2.0);
    const double cd = std::sqrt((1.0 + m) / 2.0);
    double alpha = 0.0;
    if (displaced) alpha = displacement_amplitude(g, gamma_over_omega);
    if (branch == Branch::Upper) {
      c0 = cu;
      c1 = -cd;
    } else {
      c0 = cd;
      c1 = -cu;
      alpha = -alpha;
    }
    boson = displaced_squeezed_state(alpha, squeeze_param(phase, g), cutoff);
  }
  Eigen::VectorXcd amps(2 * f);
  amps.head(f) = c0 * boson.amplitudes;
  amps.tail(f) = c1 * boson.amplitudes;
  StateVector out(std::move(amps), 2, f);
  out.truncation_warning = boson.truncation_warning;
  return out.normalized();
}

StateVector analytic_ground_state(PhaseLabel phase, Branch branch, double g,
                                  FockCutoff cutoff) {
  return embed_sector_state(sector_ground_state(phase, branch, g, cutoff),
                            SectorLabel::Plus);
}

StateVector analytic_ground_state_physical(PhaseLabel phase, Branch branch, double g,
                                           double gamma_over_omega, FockCutoff cutoff) {
  return embed_sector_state(
      sector_ground_state(phase, branch, g, cutoff, true, gamma_over_omega),
      SectorLabel::Plus);
}

ClosedFormObservables observables_closed_form(PhaseLabel phase, double g, Branch branch) {
  check_phase_domain(phase, g);
  if (phase == PhaseLabel::Normal) return ClosedFormObservables{0.0, 1.0, 0.0};
  check_branch(phase, branch);
  const double g2 = g * g;
  const double sign = branch == Branch::Upper ? -1.0 : 1.0;
  return ClosedFormObservables{(g2 - 1.0 / g2) / 4.0, 1.0 / g2,
                               sign * std::sqrt(1.0 - 1.0 / g2)};
}

ClosedFormObservables branch_state_observables(PhaseLabel phase, double g, Branch branch) {
  check_phase_domain(phase, g);
  if (phase == PhaseLabel::Normal) return ClosedFormObservables{0.0, 1.0, 0.0};
  check_branch(phase, branch);
  const double g2 = g * g;
  const double sign = branch == Branch::Upper ? -1.0 : 1.0;
  return ClosedFormObservables{(g2 - 1.0 / g2) / 2.0, 1.0 / g2,
                               sign * std::sqrt(1.0 - std::pow(g, -4.0))};
}

CriticalCouplings critical_couplings(const ModelParams& p) {
  SectorParams sp = derive_sector_params(p);
  if (!(p.gamma > 0.0)) {
    throw std::domain_error("critical_couplings: gamma must be positive");
  }
  const double lp = std::abs(sp.lam_plus);
  const double lm = std::abs(sp.lam_minus);
  const double scale = std::max({1.0, std::abs(p.eps1), std::abs(p.eps2), lp, lm});
  if (lp == 0.0 && lm == 0.0) {
    throw std::domain_error("critical_couplings: undefined when both lam_pm vanish");
  }
  const double inf = std::numeric_limits<double>::infinity();
  if (lm == 0.0) {
    // Counter-biased style sweep over g_plus; the Minus sector never couples.
    return CriticalCouplings{1.0, inf, SectorLabel::Plus};
  }
  if (std::abs(p.eps1) > 1e-12 * scale || std::abs(p.eps2) > 1e-12 * scale) {
    throw std::invalid_argument(
        "critical_couplings: defined for the unbiased (eps1 = eps2 = 0) or "
        "counter-biased (lam_minus = 0) configurations");
  }
  // Unbiased sweep over g_minus: g_plus = g * lam_plus/lam_minus reaches 1 at
  // g = lam_minus/lam_plus.
  const double gc_plus = lp == 0.0 ? inf : lm / lp;
  SectorLabel sector = gc_plus <= 1.0 ? SectorLabel::Plus : SectorLabel::Minus;
  return CriticalCouplings{gc_plus, 1.0, sector};
}

}  // namespace qrm2
