#pragma once

#include "qrm2/model.hpp"
#include "qrm2/types.hpp"

#include <vector>

namespace qrm2 {

struct AnalyticPrediction {
  double g = 0.0;
  PhaseLabel phase = PhaseLabel::Normal;
  Branch branch = Branch::NotApplicable;
  double energy = 0.0;           // finite-parameter closed form (omega and gamma terms)
  double rescaled_energy = 0.0;  // E * omega/gamma in the classical-oscillator limit
  double squeeze_r = 0.0;
  double n_rescaled = 0.0;
  double concurrence = 0.0;
  double magnetization = 0.0;
};

// r_np = -ln(1-g^2)/4 on 0 <= g < 1, r_sp = -ln(1-g^-4)/4 on g > 1;
// diverges logarithmically at g = 1, which is outside both domains.
double squeeze_param(PhaseLabel phase, double g);

// Plus-sector ground energy in the classical-oscillator limit:
//   Normal        omega (sqrt(1-g^2) - 1)/2 - gamma
//   Superradiant  omega (sqrt(1-g^-4) - 1)/2 - gamma (g^2 + g^-2)/2
double ground_energy(PhaseLabel phase, double omega, double gamma, double g);
double ground_energy(PhaseLabel phase, const ModelParams& p);  // g = g_plus

struct MinusSectorGround {
  double energy = 0.0;
  StateVector state;  // full labeled basis, boson factor |0>
};

// Exact ground of the decoupled Minus sector, energy -sqrt(eps_minus^2 + gamma^2);
// requires the counter-biased configuration (eps_plus = 0, lam_minus = 0).
MinusSectorGround minus_sector_ground(const ModelParams& p, FockCutoff cutoff = FockCutoff(1));

struct RescaledEnergyPair {
  double g = 0.0;
  double e_plus = 0.0;   // -omega for g<1, -omega (g^2+g^-2)/2 for g>1
  double e_minus = 0.0;  // -omega
};

std::vector<RescaledEnergyPair> rescaled_energies(const ModelParams& p,
                                                  const std::vector<double>& g_grid);

// Superradiant boson displacement: alpha^2 = (gamma/(2 omega)) (g^2 - g^-2).
double displacement_amplitude(double g, double gamma_over_omega);

// Sector-basis ground state (qubit_dim = 2): the phase's spin combination
// tensored with a squeezed boson factor. With displaced = true the
// superradiant branches acquire their finite-(gamma/omega) displacement
// (upper branch +alpha, lower branch -alpha); the Normal phase ignores it.
// Upper branch spin part (c_u, -c_d), lower (c_d, -c_u), with
// c_u = sqrt((1-m)/2), c_d = sqrt((1+m)/2), m = sqrt(1-g^-4).
StateVector sector_ground_state(PhaseLabel phase, Branch branch, double g,
                                FockCutoff cutoff, bool displaced = false,
                                double gamma_over_omega = 0.0);

// Same states embedded in the Plus sector of the full labeled basis.
// analytic_ground_state is the undisplaced closed-form expression;
// the _physical variant adds the displacement that localizes each branch and
// is the one that matches converged numerics at finite gamma/omega.
StateVector analytic_ground_state(PhaseLabel phase, Branch branch, double g,
                                  FockCutoff cutoff);
StateVector analytic_ground_state_physical(PhaseLabel phase, Branch branch, double g,
                                           double gamma_over_omega, FockCutoff cutoff);

struct ClosedFormObservables {
  double n_rescaled = 0.0;
  double concurrence = 0.0;
  double magnetization = 0.0;
};

// Tabulated limit values: Normal (0, 1, 0); Superradiant
// ((g^2 - g^-2)/4, g^-2, -/+ sqrt(1 - g^-2)), upper branch negative.
ClosedFormObservables observables_closed_form(PhaseLabel phase, double g,
                                              Branch branch = Branch::NotApplicable);

// The same three quantities evaluated directly on sector_ground_state in the
// limit: photon number (g^2 - g^-2)/2 and magnetization -/+ sqrt(1 - g^-4)
// differ from the tabulated set above; concurrence agrees.
ClosedFormObservables branch_state_observables(PhaseLabel phase, double g,
                                               Branch branch = Branch::NotApplicable);

struct CriticalCouplings {
  double g_c_plus = 0.0;
  double g_c_minus = 0.0;
  SectorLabel post_qpt_sector = SectorLabel::Plus;
};

// Critical values of the sweep variable at which each sector's control
// parameter reaches 1. Counter-biased (lam_minus = 0): sweep variable g_plus,
// so (1, +inf, Plus). Unbiased: sweep variable g_minus, so g_c_minus = 1 and
// g_c_plus = |lam_minus/lam_plus|; the post-transition sector is the smaller.
CriticalCouplings critical_couplings(const ModelParams& p);

}  // namespace qrm2
