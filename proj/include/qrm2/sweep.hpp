#pragma once

#include "qrm2/analytic.hpp"
#include "qrm2/emit.hpp"
#include "qrm2/model.hpp"
#include "qrm2/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qrm2 {

enum class Scenario { CounterBiased, Unbiased };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct CutoffPolicy {
  bool automatic = true;
  int fixed_n_max = 256;  // used when automatic is false
};

struct SweepConfig {
  Scenario scenario = Scenario::CounterBiased;
  double omega = 1.0;
  std::vector<double> gamma_over_omega = {10.0, 100.0, 1000.0};
  double eps_over_gamma = 0.01;  // counter-biased only
  double lambda_ratio = 3.0;     // lam1/lam2, unbiased only; must exceed 1
  double g_min = 0.5;
  double g_max = 1.5;
  int g_steps = 21;
  CutoffPolicy cutoff;
  double eta_bias_over_gamma = 1e-3;
  OutputFormat format = OutputFormat::Csv;
  std::string out = "-";
  int workers = 1;  // 0 = hardware concurrency
  std::uint64_t seed = 12345;

  std::vector<double> g_grid() const;
  void validate() const;
};

// Flat key=value text (# comments) using the SweepConfig field names, e.g.
// gamma_over_omega=10,100,1000. Values parsed on top of base.
SweepConfig load_config_file(const std::string& path, SweepConfig base = {});

// lambda_ratio accepts "3" or "3:1".
double parse_lambda_ratio(const std::string& text);

struct SweepRecord {
  double g = 0.0;
  double gamma_over_omega = 0.0;
  SectorLabel sector = SectorLabel::Plus;
  double E0 = 0.0;
  double E0_rescaled = 0.0;
  double E1 = 0.0;
  double N = 0.0;
  double N_rescaled = 0.0;
  double M_biased = 0.0;
  double M_sq_root = 0.0;
  double C = 0.0;
  double fidelity_analytic = 0.0;
  double r_analytic = 0.0;
  int cutoff_used = 0;
  double residual = 0.0;
  bool converged = false;
};

// One record per (gamma_over_omega, sector, g) grid point, sorted by that key
// (Plus before Minus). Couplings are back-solved from g per scenario; each
// point is solved unbiased and with the eta sz bias; per-point solver failures
// set converged = false on the row and never abort the sweep.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

struct TransitionReport {
  std::map<SectorLabel, double> g_c_estimates;         // empty when no kink resolves
  std::map<SectorLabel, double> peak_second_difference;
  double grid_step = 0.0;
  double noise_floor = 0.0;
  // First g at which the two sectors' rescaled ground energies separate.
  std::optional<double> sector_split_g;
};

// Locates each sector's kink as the maximizer of the discrete second
// difference of E0_rescaled(g). Requires records from a single gamma_over_omega
// on a uniform grid of >= 20 points per sector; estimates carry +- one grid
// step of uncertainty. Curves flat relative to the noise floor (10x the worst
// row residual, rescaled) produce no estimate.
TransitionReport detect_transition(const std::vector<SweepRecord>& records);

// Closed-form table over the g grid: one row per g in the Normal phase, one
// row per branch in the Superradiant phase. The grid must not contain g = 1.
// Values at a given g do not depend on the rest of the grid.
std::vector<AnalyticPrediction> predict(const SweepConfig& cfg);
std::vector<AnalyticPrediction> predict_grid(double omega, double gamma,
                                             const std::vector<double>& g_grid);

std::string render(const std::vector<SweepRecord>& records, OutputFormat format);
std::string render(const std::vector<AnalyticPrediction>& rows, OutputFormat format);
void emit(const std::vector<SweepRecord>& records, OutputFormat format,
          const std::string& path);
void emit(const std::vector<AnalyticPrediction>& rows, OutputFormat format,
          const std::string& path);

// Parse-back of the JSON emitted for SweepRecord lists (round-trip checks).
std::vector<SweepRecord> parse_records_json(const std::string& text);

}  // namespace qrm2
