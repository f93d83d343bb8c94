#include "qrm2/analytic.hpp"
#include "qrm2/eigensolver.hpp"
#include "qrm2/emit.hpp"
#include "qrm2/fock.hpp"
#include "qrm2/model.hpp"
#include "qrm2/observables.hpp"
#include "qrm2/sweep.hpp"
#include "qrm2/types.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qrm2;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-qubit quantum Rabi model: sector Hamiltonians, eigensolvers, "
            "closed-form limits, observables, and parameter sweeps";
  m.attr("__version__") = "0.1.0";
  m.attr("DENSE_LIMIT") = kDenseLimit;

  // ---- basic types -------------------------------------------------------
  py::enum_<SectorLabel>(m, "SectorLabel")
      .value("Plus", SectorLabel::Plus)
      .value("Minus", SectorLabel::Minus);
  py::enum_<PhaseLabel>(m, "PhaseLabel")
      .value("Normal", PhaseLabel::Normal)
      .value("Superradiant", PhaseLabel::Superradiant);
  py::enum_<Branch>(m, "Branch")
      .value("Upper", Branch::Upper)
      .value("Lower", Branch::Lower)
      .value("NotApplicable", Branch::NotApplicable);

  py::class_<FockCutoff>(m, "FockCutoff")
      .def(py::init<int>(), py::arg("n_max"))
      .def_readwrite("n_max", &FockCutoff::n_max)
      .def("fock_dim", &FockCutoff::fock_dim)
      .def("__repr__",
           [](const FockCutoff& c) { return "FockCutoff(" + std::to_string(c.n_max) + ")"; });

  py::class_<OperatorMatrix>(m, "OperatorMatrix")
      .def(py::init<DenseMatrix, int, int>(), py::arg("entries"), py::arg("qubit_dim"),
           py::arg("fock_dim"))
      .def_property_readonly("dim", &OperatorMatrix::dim)
      .def_property_readonly("qubit_dim", &OperatorMatrix::qubit_dim)
      .def_property_readonly("fock_dim", &OperatorMatrix::fock_dim)
      .def("is_sparse", &OperatorMatrix::is_sparse)
      .def("is_real", &OperatorMatrix::is_real)
      .def("to_dense", &OperatorMatrix::to_dense)
      .def("apply", &OperatorMatrix::apply, py::arg("v"))
      .def("coeff", &OperatorMatrix::coeff, py::arg("i"), py::arg("j"))
      .def("hermiticity_defect", &OperatorMatrix::hermiticity_defect)
      .def("unitarity_defect", &OperatorMatrix::unitarity_defect)
      .def("basis_labels", &OperatorMatrix::basis_labels)
      .def_readwrite("truncation_warning", &OperatorMatrix::truncation_warning);

  py::class_<StateVector>(m, "StateVector")
      .def(py::init<Eigen::VectorXcd, int, int>(), py::arg("amplitudes"), py::arg("qubit_dim"),
           py::arg("fock_dim"))
      .def_readwrite("amplitudes", &StateVector::amplitudes)
      .def_readwrite("qubit_dim", &StateVector::qubit_dim)
      .def_readwrite("fock_dim", &StateVector::fock_dim)
      .def_readwrite("truncation_warning", &StateVector::truncation_warning)
      .def_property_readonly("dim", &StateVector::dim)
      .def("norm", &StateVector::norm)
      .def("normalized", &StateVector::normalized)
      .def("overlap", &StateVector::overlap, py::arg("other"))
      .def("basis_labels", &StateVector::basis_labels);

  // ---- boson operators ---------------------------------------------------
  py::class_<LadderOperators>(m, "LadderOperators")
      .def_readonly("a", &LadderOperators::a)
      .def_readonly("a_dag", &LadderOperators::a_dag)
      .def_readonly("n_op", &LadderOperators::n_op)
      .def_readonly("x_op", &LadderOperators::x_op);
  m.def("ladder_operators", &ladder_operators, py::arg("cutoff"));
  m.def("squeeze_operator", &squeeze_operator, py::arg("r"), py::arg("cutoff"));
  m.def("squeezed_vacuum", &squeezed_vacuum, py::arg("r"), py::arg("cutoff"));
  m.def("displaced_squeezed_state", &displaced_squeezed_state, py::arg("alpha"), py::arg("r"),
        py::arg("cutoff"));

  // ---- model -------------------------------------------------------------
  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("omega", &ModelParams::omega)
      .def_readwrite("eps1", &ModelParams::eps1)
      .def_readwrite("eps2", &ModelParams::eps2)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_readwrite("lam1", &ModelParams::lam1)
      .def_readwrite("lam2", &ModelParams::lam2)
      .def_readwrite("allow_nonpositive_gamma", &ModelParams::allow_nonpositive_gamma)
      .def("validate", &ModelParams::validate);

  py::class_<SectorParams>(m, "SectorParams")
      .def_readonly("eps_plus", &SectorParams::eps_plus)
      .def_readonly("eps_minus", &SectorParams::eps_minus)
      .def_readonly("lam_plus", &SectorParams::lam_plus)
      .def_readonly("lam_minus", &SectorParams::lam_minus)
      .def_readonly("g_plus", &SectorParams::g_plus)
      .def_readonly("g_minus", &SectorParams::g_minus);
  m.def("derive_sector_params", &derive_sector_params, py::arg("params"));
  m.def("counter_biased_params", &counter_biased_params, py::arg("omega"), py::arg("gamma"),
        py::arg("eps"), py::arg("g"));
  m.def("unbiased_params", &unbiased_params, py::arg("omega"), py::arg("gamma"),
        py::arg("lambda_ratio"), py::arg("g"));
  m.def("build_full_hamiltonian", &build_full_hamiltonian, py::arg("params"), py::arg("cutoff"));
  m.def("build_sector_hamiltonian", &build_sector_hamiltonian, py::arg("params"),
        py::arg("sector"), py::arg("cutoff"), py::arg("sigma_z_bias") = 0.0);
  m.def("parity_permutation", &parity_permutation, py::arg("cutoff"));
  m.def("build_quadratic_effective", &build_quadratic_effective, py::arg("params"),
        py::arg("phase"), py::arg("cutoff"));

  // ---- eigensolvers ------------------------------------------------------
  py::enum_<EigenMethod>(m, "EigenMethod")
      .value("Auto", EigenMethod::Auto)
      .value("Dense", EigenMethod::Dense)
      .value("Lanczos", EigenMethod::Lanczos);

  py::class_<SolveOptions>(m, "SolveOptions")
      .def(py::init<>())
      .def_readwrite("method", &SolveOptions::method)
      .def_readwrite("seed", &SolveOptions::seed)
      .def_readwrite("max_basis", &SolveOptions::max_basis);

  py::class_<EigenResult>(m, "EigenResult")
      .def_readonly("eigenvalues", &EigenResult::eigenvalues)
      .def_readonly("eigenvectors", &EigenResult::eigenvectors)
      .def_readonly("cutoff_used", &EigenResult::cutoff_used)
      .def_readonly("residual_norms", &EigenResult::residual_norms)
      .def_readonly("converged", &EigenResult::converged)
      .def_readonly("iterations", &EigenResult::iterations);

  m.def("lowest_eigenpairs", &lowest_eigenpairs, py::arg("H"), py::arg("k"),
        py::arg("tol") = 1e-8, py::arg("opts") = SolveOptions{},
        py::call_guard<py::gil_scoped_release>());

  py::class_<LadderStep>(m, "LadderStep")
      .def_readonly("n_max", &LadderStep::n_max)
      .def_readonly("eigenvalues", &LadderStep::eigenvalues)
      .def_readonly("max_delta", &LadderStep::max_delta);
  py::class_<ConvergenceStudy>(m, "ConvergenceStudy")
      .def_readonly("steps", &ConvergenceStudy::steps)
      .def_readonly("result", &ConvergenceStudy::result);

  // the builder callback may be a Python callable; it re-acquires the GIL on
  // its own, so the solver loop itself can run without it
  m.def("converge_cutoff_study", &converge_cutoff_study, py::arg("builder"), py::arg("k") = 2,
        py::arg("energy_tol") = 0.0, py::arg("n_start") = 16, py::arg("n_cap") = 4096,
        py::arg("opts") = SolveOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def("converge_cutoff", &converge_cutoff, py::arg("builder"), py::arg("k") = 2,
        py::arg("energy_tol") = 0.0, py::arg("n_start") = 16, py::arg("n_cap") = 4096,
        py::arg("opts") = SolveOptions{}, py::call_guard<py::gil_scoped_release>());

  // ---- closed forms ------------------------------------------------------
  m.def("squeeze_param", &squeeze_param, py::arg("phase"), py::arg("g"));
  m.def("ground_energy",
        py::overload_cast<PhaseLabel, double, double, double>(&ground_energy), py::arg("phase"),
        py::arg("omega"), py::arg("gamma"), py::arg("g"));
  m.def("ground_energy", py::overload_cast<PhaseLabel, const ModelParams&>(&ground_energy),
        py::arg("phase"), py::arg("params"));

  py::class_<MinusSectorGround>(m, "MinusSectorGround")
      .def_readonly("energy", &MinusSectorGround::energy)
      .def_readonly("state", &MinusSectorGround::state);
  m.def("minus_sector_ground", &minus_sector_ground, py::arg("params"),
        py::arg("cutoff") = FockCutoff(1));

  py::class_<RescaledEnergyPair>(m, "RescaledEnergyPair")
      .def_readonly("g", &RescaledEnergyPair::g)
      .def_readonly("e_plus", &RescaledEnergyPair::e_plus)
      .def_readonly("e_minus", &RescaledEnergyPair::e_minus);
  m.def("rescaled_energies", &rescaled_energies, py::arg("params"), py::arg("g_grid"));

  m.def("displacement_amplitude", &displacement_amplitude, py::arg("g"),
        py::arg("gamma_over_omega"));
  m.def("sector_ground_state", &sector_ground_state, py::arg("phase"), py::arg("branch"),
        py::arg("g"), py::arg("cutoff"), py::arg("displaced") = false,
        py::arg("gamma_over_omega") = 0.0);
  m.def("analytic_ground_state", &analytic_ground_state, py::arg("phase"), py::arg("branch"),
        py::arg("g"), py::arg("cutoff"));
  m.def("analytic_ground_state_physical", &analytic_ground_state_physical, py::arg("phase"),
        py::arg("branch"), py::arg("g"), py::arg("gamma_over_omega"), py::arg("cutoff"));

  py::class_<ClosedFormObservables>(m, "ClosedFormObservables")
      .def_readonly("n_rescaled", &ClosedFormObservables::n_rescaled)
      .def_readonly("concurrence", &ClosedFormObservables::concurrence)
      .def_readonly("magnetization", &ClosedFormObservables::magnetization);
  m.def("observables_closed_form", &observables_closed_form, py::arg("phase"), py::arg("g"),
        py::arg("branch") = Branch::NotApplicable);
  m.def("branch_state_observables", &branch_state_observables, py::arg("phase"), py::arg("g"),
        py::arg("branch") = Branch::NotApplicable);

  py::class_<CriticalCouplings>(m, "CriticalCouplings")
      .def_readonly("g_c_plus", &CriticalCouplings::g_c_plus)
      .def_readonly("g_c_minus", &CriticalCouplings::g_c_minus)
      .def_readonly("post_qpt_sector", &CriticalCouplings::post_qpt_sector);
  m.def("critical_couplings", &critical_couplings, py::arg("params"));

  // ---- observables -------------------------------------------------------
  py::class_<TwoQubitDensity>(m, "TwoQubitDensity")
      .def(py::init<>())
      .def_readwrite("rho", &TwoQubitDensity::rho)
      .def("hermiticity_defect", &TwoQubitDensity::hermiticity_defect)
      .def("trace_defect", &TwoQubitDensity::trace_defect)
      .def("min_eigenvalue", &TwoQubitDensity::min_eigenvalue)
      .def("validate", &TwoQubitDensity::validate);

  m.def("embed_sector_state", &embed_sector_state, py::arg("psi"), py::arg("sector"));
  m.def("partial_trace_boson", &partial_trace_boson, py::arg("psi"));
  m.def("concurrence", &concurrence, py::arg("rho"));

  py::class_<Magnetization>(m, "Magnetization")
      .def_readonly("mean", &Magnetization::mean)
      .def_readonly("mean_square", &Magnetization::mean_square);
  m.def("magnetization", &magnetization, py::arg("psi"));
  m.def("mean_photon", &mean_photon, py::arg("psi"));
  m.def("state_fidelity", &state_fidelity, py::arg("a"), py::arg("b"));
  m.def("subspace_fidelity", &subspace_fidelity, py::arg("span"), py::arg("b"));

  // ---- sweeps and tables -------------------------------------------------
  py::enum_<Scenario>(m, "Scenario")
      .value("CounterBiased", Scenario::CounterBiased)
      .value("Unbiased", Scenario::Unbiased);
  py::enum_<OutputFormat>(m, "OutputFormat")
      .value("Csv", OutputFormat::Csv)
      .value("Json", OutputFormat::Json);
  m.def("scenario_from_string", &scenario_from_string, py::arg("name"));
  m.def("output_format_from_string", &output_format_from_string, py::arg("name"));
  m.def("parse_lambda_ratio", &parse_lambda_ratio, py::arg("text"));

  py::class_<CutoffPolicy>(m, "CutoffPolicy")
      .def(py::init<>())
      .def_readwrite("automatic", &CutoffPolicy::automatic)
      .def_readwrite("fixed_n_max", &CutoffPolicy::fixed_n_max);

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("scenario", &SweepConfig::scenario)
      .def_readwrite("omega", &SweepConfig::omega)
      .def_readwrite("gamma_over_omega", &SweepConfig::gamma_over_omega)
      .def_readwrite("eps_over_gamma", &SweepConfig::eps_over_gamma)
      .def_readwrite("lambda_ratio", &SweepConfig::lambda_ratio)
      .def_readwrite("g_min", &SweepConfig::g_min)
      .def_readwrite("g_max", &SweepConfig::g_max)
      .def_readwrite("g_steps", &SweepConfig::g_steps)
      .def_readwrite("cutoff", &SweepConfig::cutoff)
      .def_readwrite("eta_bias_over_gamma", &SweepConfig::eta_bias_over_gamma)
      .def_readwrite("format", &SweepConfig::format)
      .def_readwrite("out", &SweepConfig::out)
      .def_readwrite("workers", &SweepConfig::workers)
      .def_readwrite("seed", &SweepConfig::seed)
      .def("g_grid", &SweepConfig::g_grid)
      .def("validate", &SweepConfig::validate);
  m.def("load_config_file", &load_config_file, py::arg("path"),
        py::arg("base") = SweepConfig{});

  py::class_<SweepRecord>(m, "SweepRecord")
      .def(py::init<>())
      .def_readwrite("g", &SweepRecord::g)
      .def_readwrite("gamma_over_omega", &SweepRecord::gamma_over_omega)
      .def_readwrite("sector", &SweepRecord::sector)
      .def_readwrite("E0", &SweepRecord::E0)
      .def_readwrite("E0_rescaled", &SweepRecord::E0_rescaled)
      .def_readwrite("E1", &SweepRecord::E1)
      .def_readwrite("N", &SweepRecord::N)
      .def_readwrite("N_rescaled", &SweepRecord::N_rescaled)
      .def_readwrite("M_biased", &SweepRecord::M_biased)
      .def_readwrite("M_sq_root", &SweepRecord::M_sq_root)
      .def_readwrite("C", &SweepRecord::C)
      .def_readwrite("fidelity_analytic", &SweepRecord::fidelity_analytic)
      .def_readwrite("r_analytic", &SweepRecord::r_analytic)
      .def_readwrite("cutoff_used", &SweepRecord::cutoff_used)
      .def_readwrite("residual", &SweepRecord::residual)
      .def_readwrite("converged", &SweepRecord::converged);

  m.def("run_sweep", &run_sweep, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<TransitionReport>(m, "TransitionReport")
      .def_readonly("g_c_estimates", &TransitionReport::g_c_estimates)
      .def_readonly("peak_second_difference", &TransitionReport::peak_second_difference)
      .def_readonly("grid_step", &TransitionReport::grid_step)
      .def_readonly("noise_floor", &TransitionReport::noise_floor)
      .def_readonly("sector_split_g", &TransitionReport::sector_split_g);
  m.def("detect_transition", &detect_transition, py::arg("records"));

  py::class_<AnalyticPrediction>(m, "AnalyticPrediction")
      .def_readonly("g", &AnalyticPrediction::g)
      .def_readonly("phase", &AnalyticPrediction::phase)
      .def_readonly("branch", &AnalyticPrediction::branch)
      .def_readonly("energy", &AnalyticPrediction::energy)
      .def_readonly("rescaled_energy", &AnalyticPrediction::rescaled_energy)
      .def_readonly("squeeze_r", &AnalyticPrediction::squeeze_r)
      .def_readonly("n_rescaled", &AnalyticPrediction::n_rescaled)
      .def_readonly("concurrence", &AnalyticPrediction::concurrence)
      .def_readonly("magnetization", &AnalyticPrediction::magnetization);
  m.def("predict", &predict, py::arg("config"));
  m.def("predict_grid", &predict_grid, py::arg("omega"), py::arg("gamma"), py::arg("g_grid"));

  m.def("render",
        py::overload_cast<const std::vector<SweepRecord>&, OutputFormat>(&render),
        py::arg("records"), py::arg("format"));
  m.def("render",
        py::overload_cast<const std::vector<AnalyticPrediction>&, OutputFormat>(&render),
        py::arg("rows"), py::arg("format"));
  m.def("emit", py::overload_cast<const std::vector<SweepRecord>&, OutputFormat,
                                  const std::string&>(&emit),
        py::arg("records"), py::arg("format"), py::arg("path"));
  m.def("emit", py::overload_cast<const std::vector<AnalyticPrediction>&, OutputFormat,
                                  const std::string&>(&emit),
        py::arg("rows"), py::arg("format"), py::arg("path"));
  m.def("parse_records_json", &parse_records_json, py::arg("text"));
}
