// qrm2: sweep, converge, spectrum and closed-form prediction tables for the
// two-qubit Rabi model with a spin-spin coupling.

#include "qrm2/eigensolver.hpp"
#include "qrm2/sweep.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace qrm2;

struct CommonFlags {
  std::string scenario;
  std::string gamma_over_omega;
  std::string lambda_ratio;
  std::string cutoff;
  std::string format;
};

// Registers the SweepConfig surface on a subcommand. Numeric fields bind
// directly to cfg (whose defaults already reflect an optional --config file);
// fields with textual forms land in flags and are converted after the parse.
void add_config_options(CLI::App* cmd, SweepConfig& cfg, CommonFlags& flags) {
  cmd->add_option("--config", "key=value config file (flags override it)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--scenario", flags.scenario, "counter_biased or unbiased");
  cmd->add_option("--omega", cfg.omega, "boson frequency");
  cmd->add_option("--gamma-over-omega", flags.gamma_over_omega,
                  "comma-separated ladder of gamma/omega values");
  cmd->add_option("--eps-over-gamma", cfg.eps_over_gamma,
                  "counter-biased qubit splitting eps/gamma");
  cmd->add_option("--lambda-ratio", flags.lambda_ratio,
                  "unbiased coupling ratio lam1:lam2, e.g. 3 or 3:1");
  cmd->add_option("--g-min", cfg.g_min, "lower end of the g grid");
  cmd->add_option("--g-max", cfg.g_max, "upper end of the g grid");
  cmd->add_option("--g-steps", cfg.g_steps, "number of g grid points");
  cmd->add_option("--cutoff", flags.cutoff, "'auto' or a fixed Fock n_max");
  cmd->add_option("--eta-bias-over-gamma", cfg.eta_bias_over_gamma,
                  "symmetry-breaking sz bias eta/gamma");
  cmd->add_option("--format", flags.format, "csv or json");
  cmd->add_option("--out", cfg.out, "output path, '-' for stdout");
  cmd->add_option("--workers", cfg.workers, "worker threads (0 = all cores)");
  cmd->add_option("--seed", cfg.seed, "iterative-solver start-block seed");
}

void apply_text_flags(const CLI::App* cmd, SweepConfig& cfg, const CommonFlags& flags) {
  if (cmd->count("--scenario")) cfg.scenario = scenario_from_string(flags.scenario);
  if (cmd->count("--gamma-over-omega")) {
    cfg.gamma_over_omega.clear();
    std::stringstream ss(flags.gamma_over_omega);
    std::string item;
    while (std::getline(ss, item, ',')) {
      cfg.gamma_over_omega.push_back(std::stod(item));
    }
  }
  if (cmd->count("--lambda-ratio")) cfg.lambda_ratio = parse_lambda_ratio(flags.lambda_ratio);
  if (cmd->count("--cutoff")) {
    if (flags.cutoff == "auto") {
      cfg.cutoff.automatic = true;
    } else {
      cfg.cutoff.automatic = false;
      cfg.cutoff.fixed_n_max = std::stoi(flags.cutoff);
    }
  }
  if (cmd->count("--format")) cfg.format = output_format_from_string(flags.format);
}

// The config file must be loaded before CLI11 binds defaults, so --config is
// resolved by a pre-scan of raw argv.
std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return "";
}

ModelParams point_params(const SweepConfig& cfg, double g) {
  const double gamma = cfg.gamma_over_omega.front() * cfg.omega;
  return cfg.scenario == Scenario::CounterBiased
             ? counter_biased_params(cfg.omega, gamma, cfg.eps_over_gamma * gamma, g)
             : unbiased_params(cfg.omega, gamma, cfg.lambda_ratio, g);
}

int cmd_sweep(const SweepConfig& cfg) {
  const std::vector<SweepRecord> records = run_sweep(cfg);
  emit(records, cfg.format, cfg.out);
  for (const SweepRecord& rec : records) {
    if (!rec.converged) return 3;
  }
  return 0;
}

int cmd_predict(const SweepConfig& cfg) {
  emit(predict(cfg), cfg.format, cfg.out);
  return 0;
}

int cmd_converge(const SweepConfig& cfg, double g, const std::string& sector_name,
                 int k, double energy_tol, int n_start, int n_cap) {
  const ModelParams p = point_params(cfg, g);
  const SectorLabel sector = sector_name == "minus" ? SectorLabel::Minus
                                                    : SectorLabel::Plus;
  SolveOptions opts;
  opts.seed = cfg.seed;
  const HamiltonianBuilder builder = [&p, sector](FockCutoff c) {
    return build_sector_hamiltonian(p, sector, c);
  };
  const ConvergenceStudy study =
      converge_cutoff_study(builder, k, energy_tol, n_start, n_cap, opts);

  Table table;
  table.columns = {"n_max"};
  for (int i = 0; i < k; ++i) table.columns.push_back("E" + std::to_string(i));
  table.columns.push_back("max_delta");
  for (const LadderStep& step : study.steps) {
    std::vector<Cell> row{static_cast<long long>(step.n_max)};
    for (int i = 0; i < k; ++i) {
      row.emplace_back(i < static_cast<int>(step.eigenvalues.size())
                           ? step.eigenvalues[i]
                           : std::numeric_limits<double>::quiet_NaN());
    }
    row.emplace_back(step.max_delta);
    table.rows.push_back(std::move(row));
  }
  write_output(render_table(table, cfg.format), cfg.out);
  return study.result.converged ? 0 : 3;
}

int cmd_spectrum(const SweepConfig& cfg, double g, const std::string& sector_name,
                 int k) {
  const ModelParams p = point_params(cfg, g);
  const double gamma = cfg.gamma_over_omega.front() * cfg.omega;
  std::vector<SectorLabel> sectors;
  if (sector_name == "plus") {
    sectors = {SectorLabel::Plus};
  } else if (sector_name == "minus") {
    sectors = {SectorLabel::Minus};
  } else {
    sectors = {SectorLabel::Plus, SectorLabel::Minus};
  }

  SolveOptions opts;
  opts.seed = cfg.seed;
  Table table;
  table.columns = {"sector", "index", "E", "residual", "cutoff_used", "converged"};
  bool all_converged = true;
  for (SectorLabel sector : sectors) {
    EigenResult res;
    if (cfg.cutoff.automatic) {
      const HamiltonianBuilder builder = [&p, sector](FockCutoff c) {
        return build_sector_hamiltonian(p, sector, c);
      };
      res = converge_cutoff(builder, k, 1e-8 * gamma, 32, 4096, opts);
    } else {
      res = lowest_eigenpairs(
          build_sector_hamiltonian(p, sector, FockCutoff(cfg.cutoff.fixed_n_max)), k,
          1e-8, opts);
    }
    all_converged = all_converged && res.converged;
    for (int i = 0; i < static_cast<int>(res.eigenvalues.size()); ++i) {
      table.rows.push_back({to_string(sector), static_cast<long long>(i),
                            res.eigenvalues[i], res.residual_norms[i],
                            static_cast<long long>(res.cutoff_used.n_max),
                            res.converged});
    }
  }
  write_output(render_table(table, cfg.format), cfg.out);
  return all_converged ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-qubit Rabi model: sweeps, cutoff studies and closed-form tables"};
  app.require_subcommand(1);

  SweepConfig cfg;
  try {
    const std::string config_path = find_config_path(argc, argv);
    if (!config_path.empty()) cfg = load_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CommonFlags flags;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve every (gamma/omega, sector, g) grid point");
  CLI::App* predict_cmd = app.add_subcommand("predict", "closed-form limit table over the g grid");
  CLI::App* converge_cmd = app.add_subcommand("converge", "cutoff-doubling study at one grid point");
  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "lowest-k eigenvalues at one grid point");
  add_config_options(sweep_cmd, cfg, flags);
  add_config_options(predict_cmd, cfg, flags);
  add_config_options(converge_cmd, cfg, flags);
  add_config_options(spectrum_cmd, cfg, flags);

  double point_g = 1.0;
  std::string sector_name = "plus";
  int k_converge = 2;
  double energy_tol = 0.0;
  int n_start = 32;
  int n_cap = 4096;
  converge_cmd->add_option("--g", point_g, "control parameter g")->required();
  converge_cmd->add_option("--sector", sector_name, "plus or minus")
      ->check(CLI::IsMember({"plus", "minus"}));
  converge_cmd->add_option("--k", k_converge, "number of tracked eigenvalues");
  converge_cmd->add_option("--energy-tol", energy_tol,
                           "per-eigenvalue ladder tolerance (0 = automatic)");
  converge_cmd->add_option("--n-start", n_start, "first cutoff of the ladder");
  converge_cmd->add_option("--n-cap", n_cap, "largest cutoff attempted");

  std::string spectrum_sector = "both";
  int k_spectrum = 4;
  spectrum_cmd->add_option("--g", point_g, "control parameter g")->required();
  spectrum_cmd->add_option("--sector", spectrum_sector, "plus, minus or both")
      ->check(CLI::IsMember({"plus", "minus", "both"}));
  spectrum_cmd->add_option("--k", k_spectrum, "number of eigenvalues per sector");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    apply_text_flags(active, cfg, flags);
    cfg.validate();
    if (active == sweep_cmd) return cmd_sweep(cfg);
    if (active == predict_cmd) return cmd_predict(cfg);
    if (active == converge_cmd) {
      return cmd_converge(cfg, point_g, sector_name, k_converge, energy_tol, n_start,
                          n_cap);
    }
    return cmd_spectrum(cfg, point_g, spectrum_sector, k_spectrum);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
