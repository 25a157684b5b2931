#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pulseqfi/biphoton.hpp"
#include "pulseqfi/casestudy.hpp"
#include "pulseqfi/fisher.hpp"
#include "pulseqfi/jcshort.hpp"
#include "pulseqfi/kmsim.hpp"
#include "pulseqfi/onephoton.hpp"
#include "pulseqfi/pulses.hpp"
#include "pulseqfi/version.hpp"

namespace py = pybind11;
using namespace pulseqfi;

PYBIND11_MODULE(_pulseqfi, m) {
  m.doc() = "Fisher-information bounds for pulsed quantum light spectroscopy";
  m.attr("__version__") = kVersion;

  // ---- pulses ----
  py::class_<pulses::PulseShape>(m, "PulseShape")
      .def_static("rectangular", &pulses::PulseShape::rectangular, py::arg("duration"),
                  py::arg("arrival") = 0.0)
      .def_static("rising_exp", &pulses::PulseShape::rising_exp, py::arg("duration"),
                  py::arg("arrival") = 0.0)
      .def_static("decaying_exp", &pulses::PulseShape::decaying_exp, py::arg("duration"),
                  py::arg("arrival") = 0.0)
      .def_static("symmetric_exp", &pulses::PulseShape::symmetric_exp, py::arg("duration"),
                  py::arg("arrival") = 0.0)
      .def_static("gaussian", &pulses::PulseShape::gaussian, py::arg("duration"),
                  py::arg("arrival") = 0.0)
      .def_static("sampled", &pulses::PulseShape::sampled)
      .def_static("from_csv", &pulses::PulseShape::from_csv)
      .def_static("by_name", &pulses::PulseShape::by_name, py::arg("name"), py::arg("duration"),
                  py::arg("arrival") = 0.0)
      .def("amplitude", &pulses::PulseShape::amplitude)
      .def("cumulative", &pulses::PulseShape::cumulative)
      .def("cumulative_sq", &pulses::PulseShape::cumulative_sq)
      .def("scale_invariant_F", &pulses::PulseShape::scale_invariant_F)
      .def("t_sigma", &pulses::PulseShape::t_sigma)
      .def_property_readonly("duration", &pulses::PulseShape::duration)
      .def_property_readonly("arrival", &pulses::PulseShape::arrival);

  // ---- fisher ----
  py::class_<fisher::FisherDecomposition>(m, "FisherDecomposition")
      .def_readonly("classical", &fisher::FisherDecomposition::classical)
      .def_readonly("quantum", &fisher::FisherDecomposition::quantum)
      .def_readonly("total", &fisher::FisherDecomposition::total);
  m.def("cfi_binary", &fisher::cfi_binary);
  m.def("qfi_pure", &fisher::qfi_pure);
  m.def("qfi_rank2_gram", [](const Eigen::Matrix4cd& g) {
    fisher::GramMatrix4 gm{g};
    return fisher::qfi_rank2_gram(gm);
  });
  m.def("orthogonal_rank2", &fisher::orthogonal_rank2);
  m.def("qfi_eigen", &fisher::qfi_eigen, py::arg("rho"), py::arg("drho"),
        py::arg("eig_threshold") = 1e-12);
  m.def("extended_convexity_rhs",
        [](const std::vector<double>& p, const std::vector<double>& dp,
           const std::vector<double>& q) { return fisher::extended_convexity_rhs(p, dp, q); });

  // ---- onephoton ----
  py::class_<onephoton::CouplingConfig>(m, "CouplingConfig")
      .def(py::init<>())
      .def_readwrite("gamma_T", &onephoton::CouplingConfig::gamma_T)
      .def_readwrite("gamma_perp_ratio", &onephoton::CouplingConfig::gamma_perp_ratio)
      .def_readwrite("points_per_unit", &onephoton::CouplingConfig::points_per_unit)
      .def_readwrite("asymptotic_decay", &onephoton::CouplingConfig::asymptotic_decay)
      .def_readwrite("t_end_over_T", &onephoton::CouplingConfig::t_end_over_T);
  py::class_<onephoton::SinglePhotonSolution>(m, "SinglePhotonSolution")
      .def_property_readonly("times",
                             [](const onephoton::SinglePhotonSolution& s) {
                               std::vector<double> t(s.grid().num_nodes());
                               for (std::size_t k = 0; k < t.size(); ++k) t[k] = s.grid().node(k);
                               return t;
                             })
      .def_property_readonly("psi_e", &onephoton::SinglePhotonSolution::psi_e)
      .def_property_readonly("p_loss", &onephoton::SinglePhotonSolution::p_loss)
      .def_property_readonly("env_norm_sq", &onephoton::SinglePhotonSolution::env_norm_sq)
      .def("wavepacket", &onephoton::SinglePhotonSolution::wavepacket)
      .def("unit_norm_violation", &onephoton::SinglePhotonSolution::unit_norm_violation);
  m.def("solve_single_photon", [](const pulses::PulseShape& s, const onephoton::CouplingConfig& c) {
    return onephoton::solve(s, c);
  });
  m.def("qfi_decomposition",
        [](const pulses::PulseShape& s, const onephoton::CouplingConfig& c, double t) {
          return onephoton::qfi_decomposition(s, c, t);
        });
  m.def("cfi_original_mode",
        [](const pulses::PulseShape& s, const onephoton::CouplingConfig& c, double t) {
          return onephoton::cfi_original_mode(s, c, t);
        });
  py::class_<onephoton::SweepRow>(m, "SweepRow")
      .def_readonly("gamma_T", &onephoton::SweepRow::gamma_T)
      .def_readonly("q_total", &onephoton::SweepRow::q_total)
      .def_readonly("c_classical", &onephoton::SweepRow::c_classical)
      .def_readonly("q_quantum", &onephoton::SweepRow::q_quantum)
      .def_readonly("c_orig", &onephoton::SweepRow::c_orig)
      .def_readonly("max_pe", &onephoton::SweepRow::max_pe);
  py::enum_<pulses::ShapeKind>(m, "ShapeKind")
      .value("Rectangular", pulses::ShapeKind::Rectangular)
      .value("RisingExp", pulses::ShapeKind::RisingExp)
      .value("DecayingExp", pulses::ShapeKind::DecayingExp)
      .value("SymmetricExp", pulses::ShapeKind::SymmetricExp)
      .value("Gaussian", pulses::ShapeKind::Gaussian)
      .value("Sampled", pulses::ShapeKind::Sampled);
  m.def("asymptotic_sweep",
        [](pulses::ShapeKind kind, double ratio, const std::vector<double>& grid, int ppu) {
          return onephoton::asymptotic_sweep(kind, ratio, grid, ppu);
        },
        py::arg("kind"), py::arg("gamma_perp_ratio"), py::arg("gamma_T_grid"),
        py::arg("points_per_unit") = 64);

  // ---- jcshort ----
  py::class_<jcshort::FockCoefficients>(m, "FockCoefficients")
      .def_static("fock", &jcshort::FockCoefficients::fock)
      .def_static("coherent", &jcshort::FockCoefficients::coherent)
      .def_static("squeezed_vacuum", &jcshort::FockCoefficients::squeezed_vacuum)
      .def_static("custom", &jcshort::FockCoefficients::custom)
      .def_property_readonly("coeffs", &jcshort::FockCoefficients::coeffs)
      .def("mean_photons", &jcshort::FockCoefficients::mean_photons);
  py::class_<jcshort::JCBranches>(m, "JCBranches")
      .def_readonly("excited", &jcshort::JCBranches::excited)
      .def_readonly("ground", &jcshort::JCBranches::ground);
  m.def("jc_evolve", &jcshort::jc_evolve);
  m.def("jc_qfi", &jcshort::jc_qfi);
  m.def("atom_pure_qfi_bound", &jcshort::atom_pure_qfi_bound);
  py::class_<jcshort::LinearAbsorptionResult>(m, "LinearAbsorptionResult")
      .def_readonly("p_e", &jcshort::LinearAbsorptionResult::p_e)
      .def_readonly("dimensionless_qfi", &jcshort::LinearAbsorptionResult::dimensionless_qfi);
  m.def("linear_absorption_probe", &jcshort::linear_absorption_probe, py::arg("state"),
        py::arg("gamma"), py::arg("T"), py::arg("F_t"), py::arg("guard") = 0.1);

  // ---- kmsim ----
  py::class_<kmsim::KMOptions>(m, "KMOptions")
      .def(py::init<>())
      .def_readwrite("pulse_dim", &kmsim::KMOptions::pulse_dim)
      .def_readwrite("aux_dim", &kmsim::KMOptions::aux_dim)
      .def_readwrite("dt_over_T", &kmsim::KMOptions::dt_over_T)
      .def_readwrite("t_start", &kmsim::KMOptions::t_start)
      .def_readwrite("sample_target", &kmsim::KMOptions::sample_target);
  py::class_<kmsim::KMSample>(m, "KMSample")
      .def_readonly("t", &kmsim::KMSample::t)
      .def_readonly("p_e", &kmsim::KMSample::p_e)
      .def_readonly("n_pulse", &kmsim::KMSample::n_pulse)
      .def_readonly("n_aux", &kmsim::KMSample::n_aux)
      .def_readonly("trace", &kmsim::KMSample::trace)
      .def_readonly("min_eig", &kmsim::KMSample::min_eig);
  py::class_<kmsim::TripartiteState>(m, "TripartiteState")
      .def_readonly("rho", &kmsim::TripartiteState::rho)
      .def_readonly("time", &kmsim::TripartiteState::time);
  py::class_<kmsim::KMTrajectory>(m, "KMTrajectory")
      .def_readonly("samples", &kmsim::KMTrajectory::samples)
      .def_readonly("final_state", &kmsim::KMTrajectory::final_state)
      .def_readonly("max_aux_occupation", &kmsim::KMTrajectory::max_aux_occupation);
  m.def("km_evolve", &kmsim::km_evolve, py::arg("initial"), py::arg("shape"), py::arg("gamma"),
        py::arg("gamma_perp"), py::arg("t_end"), py::arg("opts") = kmsim::KMOptions{});
  m.def("reduced_pulse_state", &kmsim::reduced_pulse_state);
  m.def("trace_distance", &kmsim::trace_distance);
  m.def("jc_reduced_state", &kmsim::jc_reduced_state);

  // ---- biphoton ----
  py::class_<biphoton::GaussianJSA>(m, "GaussianJSA")
      .def(py::init<>())
      .def_readwrite("sigma_p", &biphoton::GaussianJSA::sigma_p)
      .def_readwrite("T_S", &biphoton::GaussianJSA::T_S)
      .def_readwrite("T_I", &biphoton::GaussianJSA::T_I)
      .def_readwrite("a", &biphoton::GaussianJSA::a)
      .def_readwrite("b", &biphoton::GaussianJSA::b)
      .def_readwrite("c", &biphoton::GaussianJSA::c);
  py::class_<biphoton::SchmidtSpectrum>(m, "SchmidtSpectrum")
      .def_readonly("w", &biphoton::SchmidtSpectrum::w)
      .def_readonly("k_S", &biphoton::SchmidtSpectrum::k_S)
      .def_readonly("k_I", &biphoton::SchmidtSpectrum::k_I)
      .def_readonly("weights", &biphoton::SchmidtSpectrum::weights);
  m.def("build_jsa", &biphoton::build_jsa, py::arg("sigma_p"), py::arg("T_qent"),
        py::arg("splitS") = 0.12, py::arg("splitI") = 1.12);
  m.def("schmidt_decompose", &biphoton::schmidt_decompose, py::arg("jsa"), py::arg("n_max") = 64);
  m.def("entanglement_entropy", &biphoton::entanglement_entropy, py::arg("spec"),
        py::arg("log_base") = 0.0);
  m.def("hermite_gauss", &biphoton::hermite_gauss);
  m.def("hermite_gauss_cumulative", &biphoton::hermite_gauss_cumulative);
  m.def("biphoton_qfi_short", &biphoton::biphoton_qfi_short, py::arg("spec"), py::arg("gamma"),
        py::arg("t"), py::arg("guard") = 0.1);
  m.def("biphoton_qfi_exact_nocoupling_loss", &biphoton::biphoton_qfi_exact_nocoupling_loss,
        py::arg("spec"), py::arg("gamma"), py::arg("t"), py::arg("points_per_unit") = 64,
        py::arg("weight_tail") = 1e-8);

  // ---- casestudy ----
  py::class_<casestudy::AtomParams>(m, "AtomParams")
      .def_readwrite("mu", &casestudy::AtomParams::mu)
      .def_readwrite("omega0", &casestudy::AtomParams::omega0)
      .def_readwrite("gamma_tot", &casestudy::AtomParams::gamma_tot)
      .def_readwrite("quantization_area", &casestudy::AtomParams::quantization_area)
      .def("gamma", &casestudy::AtomParams::gamma)
      .def("gamma_perp", &casestudy::AtomParams::gamma_perp)
      .def("perp_ratio", &casestudy::AtomParams::perp_ratio)
      .def("coupling_const_sq", &casestudy::AtomParams::coupling_const_sq);
  m.def("sodium_defaults", &casestudy::sodium_defaults);
  m.def("geometric_area", &casestudy::geometric_area);
  m.def("reparam_qfi_mu", &casestudy::reparam_qfi_mu);
  py::class_<casestudy::Figure7Row>(m, "Figure7Row")
      .def_readonly("t", &casestudy::Figure7Row::t)
      .def_readonly("fock1", &casestudy::Figure7Row::fock1)
      .def_readonly("coherent1", &casestudy::Figure7Row::coherent1)
      .def_readonly("squeezed1", &casestudy::Figure7Row::squeezed1)
      .def_readonly("biphoton", &casestudy::Figure7Row::biphoton)
      .def_readonly("schmidt0", &casestudy::Figure7Row::schmidt0);
  py::class_<casestudy::Figure8Row>(m, "Figure8Row")
      .def_readonly("t_qent", &casestudy::Figure8Row::t_qent)
      .def_readonly("biphoton", &casestudy::Figure8Row::biphoton)
      .def_readonly("pump_photon", &casestudy::Figure8Row::pump_photon)
      .def_readonly("schmidt0", &casestudy::Figure8Row::schmidt0)
      .def_readonly("entropy_nat", &casestudy::Figure8Row::entropy_nat)
      .def_readonly("entropy_bits", &casestudy::Figure8Row::entropy_bits)
      .def_readonly("w", &casestudy::Figure8Row::w);
  m.def("figure7", [](const std::vector<double>& ts) { return casestudy::figure7(ts); });
  m.def("figure8", [](const std::vector<double>& tq) { return casestudy::figure8(tq); });
}
