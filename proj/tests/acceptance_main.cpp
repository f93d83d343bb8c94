// Acceptance gate: one self-contained check per shipping criterion, one
// PASS/FAIL line each.  The process exit code is the number of failed
// criteria, so a zero exit means the full gate is green.
#include "qrm2/analytic.hpp"
#include "qrm2/eigensolver.hpp"
#include "qrm2/fock.hpp"
#include "qrm2/model.hpp"
#include "qrm2/observables.hpp"
#include "qrm2/sweep.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qrm2;

namespace {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v, int digits = 6) {
  std::ostringstream ss;
  ss << std::setprecision(digits) << v;
  return ss.str();
}

double rel_dev(double measured, double expected) {
  return std::abs(measured - expected) / std::abs(expected);
}

// --- 1. sector block structure is exact, not approximate ---------------------
CriterionResult block_decomposition() {
  std::mt19937_64 rng(20260816);
  std::uniform_real_distribution<double> uni(0.0, 5.0);
  const FockCutoff cutoff(40);
  const int f = cutoff.fock_dim();
  const auto perm = parity_permutation(cutoff);

  double worst_offblock = 0.0;
  double worst_mismatch = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    ModelParams p;
    p.omega = 1.0;
    p.eps1 = uni(rng);
    p.eps2 = uni(rng);
    p.gamma = uni(rng);
    p.lam1 = uni(rng);
    p.lam2 = uni(rng);
    if (p.gamma < 1e-6) p.gamma = 2.5;  // keep the coupling strictly positive

    const DenseMatrix h = build_full_hamiltonian(p, cutoff).to_dense();
    DenseMatrix hp(4 * f, 4 * f);
    for (int i = 0; i < 4 * f; ++i) {
      for (int j = 0; j < 4 * f; ++j) hp(i, j) = h(perm[i], perm[j]);
    }
    worst_offblock = std::max(
        {worst_offblock, hp.block(0, 2 * f, 2 * f, 2 * f).cwiseAbs().maxCoeff(),
         hp.block(2 * f, 0, 2 * f, 2 * f).cwiseAbs().maxCoeff()});

    Eigen::SelfAdjointEigenSolver<DenseMatrix> full(h, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> plus(
        build_sector_hamiltonian(p, SectorLabel::Plus, cutoff).to_dense(),
        Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> minus(
        build_sector_hamiltonian(p, SectorLabel::Minus, cutoff).to_dense(),
        Eigen::EigenvaluesOnly);

    std::vector<double> merged(plus.eigenvalues().data(),
                               plus.eigenvalues().data() + 2 * f);
    merged.insert(merged.end(), minus.eigenvalues().data(),
                  minus.eigenvalues().data() + 2 * f);
    std::sort(merged.begin(), merged.end());
    for (int i = 0; i < 4 * f; ++i) {
      worst_mismatch =
          std::max(worst_mismatch, std::abs(full.eigenvalues()[i] - merged[i]));
    }
  }

  CriterionResult r;
  r.pass = worst_offblock == 0.0 && worst_mismatch <= 1e-10;
  r.detail = "100 random sets at n_max=40; worst off-block " + num(worst_offblock) +
             ", worst merged-spectrum mismatch " + num(worst_mismatch, 3);
  return r;
}

// --- 2. cutoff study on the quadratic limit model hits the closed form -------
CriterionResult quadratic_oracle() {
  double worst = 0.0;
  bool all_converged = true;
  for (double g : {0.2, 0.6, 0.8}) {
    const ModelParams p = counter_biased_params(1.0, 10.0, 0.1, g);
    HamiltonianBuilder builder = [&p](FockCutoff c) {
      return build_quadratic_effective(p, PhaseLabel::Normal, c);
    };
    SolveOptions opts;
    opts.seed = 2;
    const EigenResult res = converge_cutoff(builder, 1, 0.0, 16, 1024, opts);
    all_converged = all_converged && res.converged;
    const double expect = ground_energy(PhaseLabel::Normal, 1.0, 10.0, g);
    worst = std::max(worst, std::abs(res.eigenvalues.at(0) - expect));
  }
  CriterionResult r;
  r.pass = all_converged && worst <= 1e-8;
  r.detail = "g in {0.2, 0.6, 0.8} at gamma=10; worst |E0 - closed form| " +
             num(worst, 3) + (all_converged ? "" : "; a study failed to converge");
  return r;
}

// --- 3. rescaled ground energy approaches -omega as gamma/omega grows --------
CriterionResult limit_convergence() {
  std::vector<double> devs;
  bool all_converged = true;
  for (double gow : {10.0, 100.0, 1000.0}) {
    const ModelParams p = counter_biased_params(1.0, gow, 0.01 * gow, 0.5);
    HamiltonianBuilder builder = [&p](FockCutoff c) {
      return build_sector_hamiltonian(p, SectorLabel::Plus, c);
    };
    SolveOptions opts;
    opts.seed = 3;
    const EigenResult res = converge_cutoff(builder, 1, 1e-8 * gow, 32, 4096, opts);
    all_converged = all_converged && res.converged;
    devs.push_back(std::abs(res.eigenvalues.at(0) / gow + 1.0));
  }
  CriterionResult r;
  r.pass = all_converged && devs[0] > devs[1] && devs[1] > devs[2] &&
           devs[2] <= 0.02;
  r.detail = "g=0.5, |E0~ + omega| over gamma/omega {10, 100, 1000}: " +
             num(devs[0], 4) + " > " + num(devs[1], 4) + " > " + num(devs[2], 4) +
             ", final <= 0.02";
  return r;
}

// --- 4. superradiant observables against the tabulated closed forms ----------
CriterionResult superradiant_observables() {
  const double gamma = 200.0;
  const double g = 1.5;
  const ModelParams p = counter_biased_params(1.0, gamma, 0.01 * gamma, g);
  HamiltonianBuilder builder = [&p](FockCutoff c) {
    return build_sector_hamiltonian(p, SectorLabel::Plus, c);
  };
  SolveOptions opts;
  opts.seed = 4;
  const EigenResult res = converge_cutoff(builder, 2, 1e-6 * gamma, 32, 4096, opts);
  const int cutoff_used = res.cutoff_used.n_max;

  const double eta = 1e-3 * gamma;
  const EigenResult biased = lowest_eigenpairs(
      build_sector_hamiltonian(p, SectorLabel::Plus, res.cutoff_used, eta), 1, 1e-8,
      opts);

  const StateVector ground = embed_sector_state(res.eigenvectors.at(0), SectorLabel::Plus);
  const StateVector ground_b =
      embed_sector_state(biased.eigenvectors.at(0), SectorLabel::Plus);

  const double c_measured = concurrence(partial_trace_boson(ground_b));
  const double m_measured = std::abs(magnetization(ground_b).mean);
  const double n_measured = mean_photon(ground) / gamma;

  const double c_expected = 1.0 / (g * g);                        // 0.4444
  const double m_expected = std::sqrt(1.0 - 1.0 / (g * g));       // 0.7454
  const double n_expected = (g * g - 1.0 / (g * g)) / 4.0;        // 0.4514

  const bool c_ok = rel_dev(c_measured, c_expected) <= 0.05;
  const bool m_ok = rel_dev(m_measured, m_expected) <= 0.05;
  const bool n_ok = rel_dev(n_measured, n_expected) <= 0.05;
  const bool cut_ok = res.converged && biased.converged && cutoff_used <= 512;

  CriterionResult r;
  r.pass = c_ok && m_ok && n_ok && cut_ok;
  r.detail = "gamma/omega=200, g=1.5, eta=1e-3*gamma: C " + num(c_measured) + " vs " +
             num(c_expected) + " (" + num(100.0 * rel_dev(c_measured, c_expected), 2) +
             "%" + (c_ok ? " ok" : " FAIL") + "); |M| " + num(m_measured) + " vs " +
             num(m_expected) + " (" + num(100.0 * rel_dev(m_measured, m_expected), 2) +
             "%" + (m_ok ? " ok" : " FAIL") + "); N~ " + num(n_measured) + " vs " +
             num(n_expected) + " (" + num(100.0 * rel_dev(n_measured, n_expected), 2) +
             "%" + (n_ok ? " ok" : " FAIL") + "); cutoff " +
             std::to_string(cutoff_used) + (cut_ok ? " <= 512 ok" : " FAIL");
  return r;
}

// --- 5. normal-phase ground state matches the squeezed-vacuum form -----------
CriterionResult normal_phase_fidelity() {
  const double gamma = 1000.0;
  const double g = 0.6;
  const ModelParams p = counter_biased_params(1.0, gamma, 0.01 * gamma, g);
  HamiltonianBuilder builder = [&p](FockCutoff c) {
    return build_sector_hamiltonian(p, SectorLabel::Plus, c);
  };
  SolveOptions opts;
  opts.seed = 5;
  const EigenResult res = converge_cutoff(builder, 1, 1e-8 * gamma, 32, 4096, opts);

  const StateVector analytic = sector_ground_state(
      PhaseLabel::Normal, Branch::NotApplicable, g, res.cutoff_used);
  const double fid = state_fidelity(res.eigenvectors.at(0), analytic);
  const double n_measured = mean_photon(res.eigenvectors.at(0));
  const double n_expected = std::pow(std::sinh(squeeze_param(PhaseLabel::Normal, g)), 2);

  CriterionResult r;
  r.pass = res.converged && fid >= 0.99 && rel_dev(n_measured, n_expected) <= 0.05;
  r.detail = "gamma/omega=1000, g=0.6: fidelity " + num(fid, 8) + " >= 0.99, N " +
             num(n_measured) + " vs sinh^2(r) " + num(n_expected) + " (" +
             num(100.0 * rel_dev(n_measured, n_expected), 2) + "%)";
  return r;
}

// --- 6. transition detection on limit curves and on real numerics ------------
std::vector<SweepRecord> curve_records(const std::vector<double>& grid,
                                       const std::vector<double>& plus_energy,
                                       const std::vector<double>& minus_energy) {
  std::vector<SweepRecord> records;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (SectorLabel s : {SectorLabel::Plus, SectorLabel::Minus}) {
      SweepRecord rec;
      rec.g = grid[i];
      rec.gamma_over_omega = 1000.0;
      rec.sector = s;
      rec.E0_rescaled = s == SectorLabel::Plus ? plus_energy[i] : minus_energy[i];
      rec.residual = 0.0;
      rec.converged = true;
      records.push_back(rec);
    }
  }
  return records;
}

CriterionResult transition_detection() {
  const ModelParams ref = counter_biased_params(1.0, 10.0, 0.1, 0.5);

  // counter-biased limit curves: only the coupled sector kinks, at g = 1
  std::vector<double> grid(201);
  for (int i = 0; i < 201; ++i) grid[i] = 0.5 + i * (1.0 / 200.0);
  std::vector<double> plus_e, minus_e;
  for (const auto& pair : rescaled_energies(ref, grid)) {
    plus_e.push_back(pair.e_plus);
    minus_e.push_back(pair.e_minus);
  }
  const auto report_cb = detect_transition(curve_records(grid, plus_e, minus_e));
  const bool cb_found = report_cb.g_c_estimates.count(SectorLabel::Plus) == 1;
  const double cb_gc =
      cb_found ? report_cb.g_c_estimates.at(SectorLabel::Plus) : std::nan("");
  const bool cb_ok =
      cb_found && std::abs(cb_gc - 1.0) <= report_cb.grid_step + 1e-12;

  // unbiased 3:1 couplings: the Plus sector sees twice the coupling, so its
  // kink sits at g = 0.5 while the Minus sector keeps its kink at g = 1
  std::vector<double> grid2(241), doubled(241);
  for (int i = 0; i < 241; ++i) {
    grid2[i] = 0.2 + i * (1.2 / 240.0);
    doubled[i] = 2.0 * grid2[i];
  }
  std::vector<double> plus2, minus2;
  for (const auto& pair : rescaled_energies(ref, doubled)) plus2.push_back(pair.e_plus);
  for (const auto& pair : rescaled_energies(ref, grid2)) minus2.push_back(pair.e_plus);
  const auto report_ub = detect_transition(curve_records(grid2, plus2, minus2));
  const bool ub_found = report_ub.g_c_estimates.count(SectorLabel::Plus) == 1 &&
                        report_ub.g_c_estimates.count(SectorLabel::Minus) == 1;
  const bool ub_ok =
      ub_found &&
      std::abs(report_ub.g_c_estimates.at(SectorLabel::Plus) - 0.5) <=
          report_ub.grid_step + 1e-12 &&
      std::abs(report_ub.g_c_estimates.at(SectorLabel::Minus) - 1.0) <=
          report_ub.grid_step + 1e-12;

  // full numerical sweep at gamma/omega = 1000
  SweepConfig cfg;
  cfg.scenario = Scenario::CounterBiased;
  cfg.gamma_over_omega = {1000.0};
  cfg.g_min = 0.85;
  cfg.g_max = 1.15;
  cfg.g_steps = 21;
  cfg.eta_bias_over_gamma = 0.0;  // no bias needed to locate the kink
  cfg.workers = 1;
  cfg.seed = 6;
  const auto t0 = std::chrono::steady_clock::now();
  const auto records = run_sweep(cfg);
  const double elapsed = seconds_since(t0);
  bool all_converged = true;
  for (const auto& rec : records) all_converged = all_converged && rec.converged;
  const auto report_num = detect_transition(records);
  const bool num_found = report_num.g_c_estimates.count(SectorLabel::Plus) == 1;
  const double num_gc =
      num_found ? report_num.g_c_estimates.at(SectorLabel::Plus) : std::nan("");
  const bool num_ok =
      all_converged && num_found && std::abs(num_gc - 1.0) <= 0.05 && elapsed <= 300.0;

  CriterionResult r;
  r.pass = cb_ok && ub_ok && num_ok;
  r.detail = "limit curves: counter-biased g_c " + num(cb_gc, 4) + ", unbiased kinks " +
             (ub_found ? num(report_ub.g_c_estimates.at(SectorLabel::Plus), 4) + "/" +
                             num(report_ub.g_c_estimates.at(SectorLabel::Minus), 4)
                       : std::string("missing")) +
             "; numerical sweep at gamma/omega=1000: g_c " + num(num_gc, 4) + " in " +
             num(elapsed, 3) + " s";
  return r;
}

// --- 7. concurrence unit oracle ----------------------------------------------
CriterionResult concurrence_suite() {
  using Eigen::Matrix4cd;
  using Eigen::Vector4cd;

  const auto conc = [](const Matrix4cd& rho) {
    TwoQubitDensity d;
    d.rho = rho;
    return concurrence(d);
  };

  Vector4cd bell = Vector4cd::Zero();
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const double c_bell = conc(bell * bell.adjoint());

  Vector4cd product = Vector4cd::Zero();
  product(1) = 1.0;
  const double c_product = conc(product * product.adjoint());

  const double p = 0.9;
  const Matrix4cd werner =
      p * (bell * bell.adjoint()) + (1.0 - p) / 4.0 * Matrix4cd::Identity();
  const double c_werner = conc(werner);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto random_state = [&] {
    Vector4cd v;
    for (int i = 0; i < 4; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    v.normalize();
    return v;
  };
  const auto random_unitary = [&] {
    Eigen::Matrix2cd m;
    for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = Complex(gauss(rng), gauss(rng));
    return Eigen::Matrix2cd(Eigen::HouseholderQR<Eigen::Matrix2cd>(m).householderQ());
  };

  double worst_invariance = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Vector4cd a = random_state();
    const Vector4cd b = random_state();
    const Matrix4cd rho = 0.3 * (a * a.adjoint()) + 0.7 * (b * b.adjoint());
    const Matrix4cd u = Eigen::kroneckerProduct(random_unitary(), random_unitary());
    worst_invariance =
        std::max(worst_invariance, std::abs(conc(u * rho * u.adjoint()) - conc(rho)));
  }

  CriterionResult r;
  r.pass = std::abs(c_bell - 1.0) <= 1e-12 && std::abs(c_product) <= 1e-12 &&
           std::abs(c_werner - 0.85) <= 1e-10 && worst_invariance <= 1e-10;
  r.detail = "Bell " + num(c_bell, 12) + ", product " + num(c_product, 3) +
             ", Werner(0.9) " + num(c_werner, 12) +
             ", worst local-unitary drift " + num(worst_invariance, 3);
  return r;
}

// --- 8. sector ordering across the transition ---------------------------------
CriterionResult degeneracy_structure() {
  const double gamma = 1000.0;
  SolveOptions opts;
  opts.seed = 8;

  const auto rescaled_ground = [&](double g, SectorLabel sector) {
    const ModelParams p = counter_biased_params(1.0, gamma, 0.01 * gamma, g);
    HamiltonianBuilder builder = [&p, sector](FockCutoff c) {
      return build_sector_hamiltonian(p, sector, c);
    };
    const EigenResult res = converge_cutoff(builder, 1, 1e-6 * gamma, 32, 4096, opts);
    if (!res.converged) throw std::runtime_error("sector solve did not converge");
    return res.eigenvalues.at(0) / gamma;
  };

  bool below_ok = true;
  double worst_split = 0.0;
  for (double g : {0.6, 0.8}) {
    const double split =
        std::abs(rescaled_ground(g, SectorLabel::Plus) - rescaled_ground(g, SectorLabel::Minus));
    worst_split = std::max(worst_split, split);
    below_ok = below_ok && split <= 0.02;
  }

  bool above_ok = true;
  std::string gaps;
  for (double g : {1.2, 1.4}) {
    const double gap =
        rescaled_ground(g, SectorLabel::Minus) - rescaled_ground(g, SectorLabel::Plus);
    const double bound = 0.9 * ((g * g + 1.0 / (g * g)) / 2.0 - 1.0);
    above_ok = above_ok && gap >= bound;
    gaps += " g=" + num(g, 2) + ": " + num(gap, 4) + " >= " + num(bound, 4) + ";";
  }

  CriterionResult r;
  r.pass = below_ok && above_ok;
  r.detail = "gamma/omega=1000: worst sector split below transition " +
             num(worst_split, 3) + " <= 0.02; gaps above:" + gaps;
  return r;
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    CriterionResult (*fn)();
  };
  const Entry entries[] = {
      {"sector block decomposition", block_decomposition},
      {"quadratic-model cutoff oracle", quadratic_oracle},
      {"limit convergence of the rescaled energy", limit_convergence},
      {"superradiant observables", superradiant_observables},
      {"normal-phase state fidelity", normal_phase_fidelity},
      {"transition detection", transition_detection},
      {"concurrence unit suite", concurrence_suite},
      {"degeneracy structure", degeneracy_structure},
  };

  int failures = 0;
  int index = 0;
  for (const Entry& entry : entries) {
    ++index;
    CriterionResult result;
    try {
      result = entry.fn();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    if (!result.pass) ++failures;
    std::printf("%s criterion %d: %s (%s)\n", result.pass ? "PASS" : "FAIL", index,
                entry.label, result.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d of 8 criteria passed\n", 8 - failures);
  return failures;
}
