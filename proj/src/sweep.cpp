#include "qrm2/sweep.hpp"

#include "qrm2/eigensolver.hpp"
#include "qrm2/observables.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qrm2 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for " + key + ": '" + text + "'");
  }
}

long long parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value for " + key + ": '" + text + "'");
  }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      throw std::invalid_argument("config: empty element in list for " + key);
    }
    out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw std::invalid_argument("config: empty list for " + key);
  return out;
}

SectorLabel sector_from_string(const std::string& s) {
  if (s == "plus") return SectorLabel::Plus;
  if (s == "minus") return SectorLabel::Minus;
  throw std::invalid_argument("unknown sector label: " + s);
}

}  // namespace

std::string to_string(Scenario s) {
  return s == Scenario::CounterBiased ? "counter_biased" : "unbiased";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "counter_biased" || s == "counter-biased") return Scenario::CounterBiased;
  if (s == "unbiased") return Scenario::Unbiased;
  throw std::invalid_argument("unknown scenario: " + s +
                              " (expected counter_biased or unbiased)");
}

std::vector<double> SweepConfig::g_grid() const {
  std::vector<double> grid(static_cast<std::size_t>(g_steps));
  const double h = (g_max - g_min) / (g_steps - 1);
  for (int i = 0; i < g_steps; ++i) grid[i] = g_min + i * h;
  grid.back() = g_max;
  return grid;
}

void SweepConfig::validate() const {
  if (!(omega > 0.0)) throw std::invalid_argument("sweep: omega must be positive");
  if (gamma_over_omega.empty()) {
    throw std::invalid_argument("sweep: gamma_over_omega list must not be empty");
  }
  double prev = 0.0;
  for (double v : gamma_over_omega) {
    if (!(v > 0.0)) throw std::invalid_argument("sweep: gamma_over_omega values must be positive");
    if (!(v > prev)) {
      throw std::invalid_argument("sweep: gamma_over_omega values must be strictly increasing");
    }
    prev = v;
  }
  if (!(eps_over_gamma >= 0.0)) {
    throw std::invalid_argument("sweep: eps_over_gamma must be non-negative");
  }
  if (scenario == Scenario::Unbiased && !(lambda_ratio > 1.0)) {
    throw std::invalid_argument("sweep: lambda_ratio must exceed 1 for the unbiased scenario");
  }
  if (!(g_min < g_max)) throw std::invalid_argument("sweep: need g_min < g_max");
  if (g_steps < 2) throw std::invalid_argument("sweep: need at least 2 grid points");
  if (!cutoff.automatic && cutoff.fixed_n_max < 1) {
    throw std::invalid_argument("sweep: fixed cutoff must be at least 1");
  }
  if (!(eta_bias_over_gamma >= 0.0)) {
    throw std::invalid_argument("sweep: eta_bias_over_gamma must be non-negative");
  }
  if (workers < 0) throw std::invalid_argument("sweep: workers must be non-negative");
}

double parse_lambda_ratio(const std::string& text) {
  const auto colon = text.find(':');
  double ratio;
  if (colon == std::string::npos) {
    ratio = parse_double("lambda_ratio", trim(text));
  } else {
    const double num = parse_double("lambda_ratio", trim(text.substr(0, colon)));
    const double den = parse_double("lambda_ratio", trim(text.substr(colon + 1)));
    if (den == 0.0) throw std::invalid_argument("lambda_ratio: zero denominator");
    ratio = num / den;
  }
  if (!std::isfinite(ratio)) throw std::invalid_argument("lambda_ratio: not finite");
  return ratio;
}

SweepConfig load_config_file(const std::string& path, SweepConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: missing '=' on line " + std::to_string(lineno));
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
    }

    if (key == "scenario") {
      base.scenario = scenario_from_string(value);
    } else if (key == "omega") {
      base.omega = parse_double(key, value);
    } else if (key == "gamma_over_omega") {
      base.gamma_over_omega = parse_double_list(key, value);
    } else if (key == "eps_over_gamma") {
      base.eps_over_gamma = parse_double(key, value);
    } else if (key == "lambda_ratio") {
      base.lambda_ratio = parse_lambda_ratio(value);
    } else if (key == "g_min") {
      base.g_min = parse_double(key, value);
    } else if (key == "g_max") {
      base.g_max = parse_double(key, value);
    } else if (key == "g_steps") {
      base.g_steps = static_cast<int>(parse_int(key, value));
    } else if (key == "cutoff") {
      if (value == "auto") {
        base.cutoff.automatic = true;
      } else {
        base.cutoff.automatic = false;
        base.cutoff.fixed_n_max = static_cast<int>(parse_int(key, value));
      }
    } else if (key == "eta_bias_over_gamma") {
      base.eta_bias_over_gamma = parse_double(key, value);
    } else if (key == "format") {
      base.format = output_format_from_string(value);
    } else if (key == "out") {
      base.out = value;
    } else if (key == "workers") {
      base.workers = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
      base.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "' on line " +
                                  std::to_string(lineno));
    }
  }
  return base;
}

namespace {

struct SweepItem {
  double gamma_over_omega = 0.0;
  SectorLabel sector = SectorLabel::Plus;
  double g = 0.0;
};

SweepRecord failed_record(const SweepItem& item) {
  SweepRecord rec;
  rec.g = item.g;
  rec.gamma_over_omega = item.gamma_over_omega;
  rec.sector = item.sector;
  rec.E0 = rec.E0_rescaled = rec.E1 = kNaN;
  rec.N = rec.N_rescaled = kNaN;
  rec.M_biased = rec.M_sq_root = rec.C = kNaN;
  rec.fidelity_analytic = rec.r_analytic = rec.residual = kNaN;
  rec.cutoff_used = 0;
  rec.converged = false;
  return rec;
}

SweepRecord solve_point(const SweepConfig& cfg, const SweepItem& item,
                        std::uint64_t seed) {
  const double gamma = item.gamma_over_omega * cfg.omega;
  const ModelParams p =
      cfg.scenario == Scenario::CounterBiased
          ? counter_biased_params(cfg.omega, gamma, cfg.eps_over_gamma * gamma, item.g)
          : unbiased_params(cfg.omega, gamma, cfg.lambda_ratio, item.g);
  const SectorParams sp = derive_sector_params(p);
  const double lam_s = item.sector == SectorLabel::Plus ? sp.lam_plus : sp.lam_minus;
  const double g_s = item.sector == SectorLabel::Plus ? sp.g_plus.value()
                                                      : sp.g_minus.value();

  SolveOptions opts;
  opts.seed = seed;

  EigenResult res;
  if (cfg.cutoff.automatic) {
    HamiltonianBuilder builder = [&p, &item](FockCutoff c) {
      return build_sector_hamiltonian(p, item.sector, c);
    };
    res = converge_cutoff(builder, 2, 1e-8 * gamma, 32, 4096, opts);
  } else {
    res = lowest_eigenpairs(
        build_sector_hamiltonian(p, item.sector, FockCutoff(cfg.cutoff.fixed_n_max)), 2,
        1e-8, opts);
  }

  const double eta = cfg.eta_bias_over_gamma * gamma;
  EigenResult biased = res;
  if (lam_s != 0.0 && eta > 0.0) {
    biased = lowest_eigenpairs(
        build_sector_hamiltonian(p, item.sector, res.cutoff_used, eta), 2, 1e-8, opts);
  }

  const StateVector ground = embed_sector_state(res.eigenvectors.at(0), item.sector);
  const StateVector ground_b = embed_sector_state(biased.eigenvectors.at(0), item.sector);

  SweepRecord rec;
  rec.g = item.g;
  rec.gamma_over_omega = item.gamma_over_omega;
  rec.sector = item.sector;
  rec.E0 = res.eigenvalues.at(0);
  rec.E0_rescaled = rec.E0 * cfg.omega / gamma;
  rec.E1 = res.eigenvalues.at(1);
  rec.N = mean_photon(ground);
  rec.N_rescaled = rec.N * cfg.omega / gamma;
  rec.M_biased = magnetization(ground_b).mean;
  rec.M_sq_root = std::sqrt(std::max(0.0, magnetization(ground).mean_square));
  rec.C = concurrence(partial_trace_boson(ground_b));
  rec.cutoff_used = res.cutoff_used.n_max;

  double worst = 0.0;
  for (double r : res.residual_norms) worst = std::max(worst, r);
  for (double r : biased.residual_norms) worst = std::max(worst, r);
  rec.residual = worst;
  rec.converged = res.converged && biased.converged;

  if (lam_s == 0.0) {
    // Decoupled sector: the exact ground is available directly.
    rec.fidelity_analytic =
        state_fidelity(ground, minus_sector_ground(p, res.cutoff_used).state);
    rec.r_analytic = 0.0;
  } else if (std::abs(g_s - 1.0) < 1e-12) {
    rec.fidelity_analytic = kNaN;
    rec.r_analytic = kNaN;
  } else if (g_s < 1.0) {
    rec.fidelity_analytic = state_fidelity(
        ground, embed_sector_state(
                    sector_ground_state(PhaseLabel::Normal, Branch::NotApplicable, g_s,
                                        res.cutoff_used),
                    item.sector));
    rec.r_analytic = squeeze_param(PhaseLabel::Normal, g_s);
  } else {
    // Above the transition the ground doublet spans the two branches; compare
    // the displaced branch state against that two-dimensional subspace.
    const StateVector branch = embed_sector_state(
        sector_ground_state(PhaseLabel::Superradiant, Branch::Upper, g_s,
                            res.cutoff_used, true, gamma / cfg.omega),
        item.sector);
    rec.fidelity_analytic = subspace_fidelity(
        {ground, embed_sector_state(res.eigenvectors.at(1), item.sector)}, branch);
    rec.r_analytic = squeeze_param(PhaseLabel::Superradiant, g_s);
  }
  return rec;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::vector<double> grid = cfg.g_grid();

  std::vector<SweepItem> items;
  items.reserve(cfg.gamma_over_omega.size() * 2 * grid.size());
  for (double gow : cfg.gamma_over_omega) {
    for (SectorLabel sector : {SectorLabel::Plus, SectorLabel::Minus}) {
      for (double g : grid) items.push_back(SweepItem{gow, sector, g});
    }
  }

  std::vector<SweepRecord> records(items.size());
  const auto run_one = [&](std::size_t i) {
    try {
      records[i] = solve_point(cfg, items[i], cfg.seed + i);
    } catch (const std::exception&) {
      records[i] = failed_record(items[i]);
    }
  };

  int nworkers = cfg.workers == 0
                     ? static_cast<int>(std::thread::hardware_concurrency())
                     : cfg.workers;
  nworkers = std::max(1, std::min<int>(nworkers, static_cast<int>(items.size())));

  if (nworkers == 1) {
    for (std::size_t i = 0; i < items.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nworkers));
    for (int w = 0; w < nworkers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1)) {
          run_one(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return records;
}

TransitionReport detect_transition(const std::vector<SweepRecord>& records) {
  if (records.empty()) throw std::invalid_argument("detect_transition: no records");
  const double gow = records.front().gamma_over_omega;
  std::map<SectorLabel, std::vector<std::pair<double, double>>> curves;
  double worst_residual = 0.0;
  double max_abs_y = 0.0;
  for (const SweepRecord& rec : records) {
    if (std::abs(rec.gamma_over_omega - gow) > 1e-12 * std::max(1.0, std::abs(gow))) {
      throw std::invalid_argument(
          "detect_transition: records must come from a single gamma_over_omega");
    }
    if (!std::isfinite(rec.E0_rescaled)) {
      throw std::invalid_argument("detect_transition: non-finite energies in records");
    }
    curves[rec.sector].emplace_back(rec.g, rec.E0_rescaled);
    if (std::isfinite(rec.residual)) {
      worst_residual = std::max(worst_residual, rec.residual);
    }
    max_abs_y = std::max(max_abs_y, std::abs(rec.E0_rescaled));
  }

  TransitionReport report;
  double grid_step = 0.0;
  for (auto& [sector, curve] : curves) {
    std::sort(curve.begin(), curve.end());
    const std::size_t n = curve.size();
    if (n < 20) {
      throw std::invalid_argument("detect_transition: need at least 20 points per sector");
    }
    const double h = (curve.back().first - curve.front().first) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double expected = curve.front().first + static_cast<double>(i) * h;
      if (std::abs(curve[i].first - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
        throw std::invalid_argument("detect_transition: g grid must be uniform");
      }
    }
    if (grid_step == 0.0) {
      grid_step = h;
    } else if (std::abs(h - grid_step) > 1e-9 * grid_step) {
      throw std::invalid_argument("detect_transition: sectors use different grids");
    }
  }
  report.grid_step = grid_step;
  report.noise_floor =
      std::max(10.0 * worst_residual / gow, 1e-12 * std::max(1.0, max_abs_y));

  for (const auto& [sector, curve] : curves) {
    const std::size_t n = curve.size();
    double peak = 0.0;
    std::size_t peak_at = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double d2 =
          std::abs(curve[i + 1].second - 2.0 * curve[i].second + curve[i - 1].second);
      if (d2 > peak) {
        peak = d2;
        peak_at = i;
      }
    }
    report.peak_second_difference[sector] = peak;
    if (peak > report.noise_floor) {
      report.g_c_estimates[sector] = curve[peak_at].first;
    }
  }

  if (curves.count(SectorLabel::Plus) && curves.count(SectorLabel::Minus)) {
    const auto& plus = curves.at(SectorLabel::Plus);
    const auto& minus = curves.at(SectorLabel::Minus);
    if (plus.size() == minus.size()) {
      const double split_tol = std::max(report.noise_floor, 1e-10);
      for (std::size_t i = 0; i < plus.size(); ++i) {
        if (minus[i].second - plus[i].second > split_tol) {
          report.sector_split_g = plus[i].first;
          break;
        }
      }
    }
  }
  return report;
}

std::vector<AnalyticPrediction> predict_grid(double omega, double gamma,
                                             const std::vector<double>& g_grid) {
  if (!(omega > 0.0) || !(gamma > 0.0)) {
    throw std::invalid_argument("predict: omega and gamma must be positive");
  }
  for (double g : g_grid) {
    if (std::abs(g - 1.0) < 1e-12) {
      throw std::invalid_argument("predict: closed forms are singular at g = 1");
    }
    if (g < 0.0) throw std::invalid_argument("predict: g must be non-negative");
  }

  std::vector<AnalyticPrediction> rows;
  for (double g : g_grid) {
    const PhaseLabel phase = g < 1.0 ? PhaseLabel::Normal : PhaseLabel::Superradiant;
    const std::vector<Branch> branches =
        phase == PhaseLabel::Normal
            ? std::vector<Branch>{Branch::NotApplicable}
            : std::vector<Branch>{Branch::Upper, Branch::Lower};
    for (Branch branch : branches) {
      AnalyticPrediction row;
      row.g = g;
      row.phase = phase;
      row.branch = branch;
      row.energy = ground_energy(phase, omega, gamma, g);
      row.rescaled_energy = g < 1.0 ? -omega : -omega * (g * g + 1.0 / (g * g)) / 2.0;
      row.squeeze_r = squeeze_param(phase, g);
      const ClosedFormObservables obs = observables_closed_form(phase, g, branch);
      row.n_rescaled = obs.n_rescaled;
      row.concurrence = obs.concurrence;
      row.magnetization = obs.magnetization;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<AnalyticPrediction> predict(const SweepConfig& cfg) {
  cfg.validate();
  return predict_grid(cfg.omega, cfg.gamma_over_omega.front() * cfg.omega, cfg.g_grid());
}

namespace {

Table records_table(const std::vector<SweepRecord>& records) {
  Table table;
  table.columns = {"g",        "gamma_over_omega", "sector",   "E0",
                   "E0_rescaled", "E1",           "N",        "N_rescaled",
                   "M_biased", "M_sq_root",       "C",        "fidelity_analytic",
                   "r_analytic", "cutoff_used",   "residual", "converged"};
  for (const SweepRecord& r : records) {
    table.rows.push_back({r.g, r.gamma_over_omega, to_string(r.sector), r.E0,
                          r.E0_rescaled, r.E1, r.N, r.N_rescaled, r.M_biased,
                          r.M_sq_root, r.C, r.fidelity_analytic, r.r_analytic,
                          static_cast<long long>(r.cutoff_used), r.residual,
                          r.converged});
  }
  return table;
}

Table predictions_table(const std::vector<AnalyticPrediction>& rows) {
  Table table;
  table.columns = {"g",         "phase",      "branch",      "energy",
                   "rescaled_energy", "squeeze_r", "n_rescaled", "concurrence",
                   "magnetization"};
  for (const AnalyticPrediction& r : rows) {
    table.rows.push_back({r.g, to_string(r.phase), to_string(r.branch), r.energy,
                          r.rescaled_energy, r.squeeze_r, r.n_rescaled, r.concurrence,
                          r.magnetization});
  }
  return table;
}

}  // namespace

std::string render(const std::vector<SweepRecord>& records, OutputFormat format) {
  return render_table(records_table(records), format);
}

std::string render(const std::vector<AnalyticPrediction>& rows, OutputFormat format) {
  return render_table(predictions_table(rows), format);
}

void emit(const std::vector<SweepRecord>& records, OutputFormat format,
          const std::string& path) {
  write_output(render(records, format), path);
}

void emit(const std::vector<AnalyticPrediction>& rows, OutputFormat format,
          const std::string& path) {
  write_output(render(rows, format), path);
}

std::vector<SweepRecord> parse_records_json(const std::string& text) {
  const nlohmann::json arr = nlohmann::json::parse(text);
  if (!arr.is_array()) throw std::invalid_argument("records JSON: expected an array");
  const auto num = [](const nlohmann::json& obj, const char* key) {
    const auto& v = obj.at(key);
    return v.is_null() ? kNaN : v.get<double>();
  };
  std::vector<SweepRecord> records;
  records.reserve(arr.size());
  for (const auto& obj : arr) {
    SweepRecord r;
    r.g = num(obj, "g");
    r.gamma_over_omega = num(obj, "gamma_over_omega");
    r.sector = sector_from_string(obj.at("sector").get<std::string>());
    r.E0 = num(obj, "E0");
    r.E0_rescaled = num(obj, "E0_rescaled");
    r.E1 = num(obj, "E1");
    r.N = num(obj, "N");
    r.N_rescaled = num(obj, "N_rescaled");
    r.M_biased = num(obj, "M_biased");
    r.M_sq_root = num(obj, "M_sq_root");
    r.C = num(obj, "C");
    r.fidelity_analytic = num(obj, "fidelity_analytic");
    r.r_analytic = num(obj, "r_analytic");
    r.cutoff_used = obj.at("cutoff_used").get<int>();
    r.residual = num(obj, "residual");
    r.converged = obj.at("converged").get<bool>();
    records.push_back(r);
  }
  return records;
}

}  // namespace qrm2
