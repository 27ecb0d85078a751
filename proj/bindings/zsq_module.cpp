#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zsq/analytic.hpp"
#include "zsq/fock.hpp"
#include "zsq/oracle.hpp"
#include "zsq/protocol.hpp"
#include "zsq/sweep.hpp"
#include "zsq/verify.hpp"

namespace py = pybind11;
using namespace zsq;

PYBIND11_MODULE(_zsq, m) {
  m.doc() =
      "Squeezed-state distillation of a bosonic mode by repeated "
      "measurements: closed forms, truncated Fock simulation and "
      "cross-verification";

  py::register_exception<NoDistillation>(m, "NoDistillation");
  py::register_exception<TailTooLarge>(m, "TailTooLarge");
  py::register_exception<NotHermitian>(m, "NotHermitian");
  py::register_exception<NoConvergence>(m, "NoConvergence");
  py::register_exception<DimMismatch>(m, "DimMismatch");
  py::register_exception<SingularDenominator>(m, "SingularDenominator");
  py::register_exception<BranchAmbiguity>(m, "BranchAmbiguity");
  py::register_exception<QuadratureNotConverged>(m, "QuadratureNotConverged");
  py::register_exception<UnknownFigure>(m, "UnknownFigure");

  py::class_<ProtocolParams>(m, "ProtocolParams")
      .def(py::init([](double tau_bar, double g_bar, double dp_bar) {
             ProtocolParams p{tau_bar, g_bar, dp_bar};
             p.validate();
             return p;
           }),
           py::arg("tau_bar"), py::arg("g_bar"), py::arg("dp_bar"))
      .def_readonly("tau_bar", &ProtocolParams::tau_bar)
      .def_readonly("g_bar", &ProtocolParams::g_bar)
      .def_readonly("dp_bar", &ProtocolParams::dp_bar)
      .def("__repr__", [](const ProtocolParams& p) {
        return "ProtocolParams(tau_bar=" + std::to_string(p.tau_bar) +
               ", g_bar=" + std::to_string(p.g_bar) +
               ", dp_bar=" + std::to_string(p.dp_bar) + ")";
      });

  py::class_<OperatorScalars>(m, "OperatorScalars")
      .def_readonly("beta", &OperatorScalars::beta)
      .def_readonly("M", &OperatorScalars::M)
      .def_readonly("G", &OperatorScalars::G)
      .def_readonly("c", &OperatorScalars::c);

  py::class_<BranchSolution>(m, "BranchSolution")
      .def_readonly("q", &BranchSolution::q)
      .def_readonly("q_tilde", &BranchSolution::q_tilde)
      .def_readonly("Lambda", &BranchSolution::lambda)
      .def_readonly("log_Lambda", &BranchSolution::log_lambda)
      .def_readonly("zeta", &BranchSolution::zeta)
      .def_readonly("eta", &BranchSolution::eta)
      .def_readonly("upper_branch", &BranchSolution::upper_branch);

  py::class_<SqueezedTarget>(m, "SqueezedTarget")
      .def_readonly("r", &SqueezedTarget::r)
      .def_readonly("phi", &SqueezedTarget::phi)
      .def_readonly("mean_quanta", &SqueezedTarget::mean_quanta)
      .def_readonly("quanta_variance", &SqueezedTarget::quanta_variance)
      .def("zeta", &SqueezedTarget::zeta);

  m.def("make_target", &make_target, py::arg("r"), py::arg("phi"));
  m.def("compute_scalars", &compute_scalars, py::arg("params"));
  m.def(
      "resolve_branch",
      [](const ProtocolParams& p) { return resolve_branch(p); },
      py::arg("params"));
  m.def(
      "spectrum",
      [](const ProtocolParams& p, int n_max) {
        return spectrum(p, n_max).gamma;
      },
      py::arg("params"), py::arg("n_max"));
  m.def("distillation_rate", &distillation_rate, py::arg("params"));
  m.def(
      "target_state",
      [](const ProtocolParams& p) { return target_state(p); },
      py::arg("params"));
  m.def("quadrature_variance", &quadrature_variance, py::arg("target"),
        py::arg("theta"));

  py::class_<PureState>(m, "PureState")
      .def_readonly("amplitudes", &PureState::amplitudes)
      .def_readonly("truncation_tail", &PureState::truncation_tail)
      .def_property_readonly("dim", &PureState::dim);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def_readonly("entries", &DensityMatrix::entries)
      .def_readonly("truncation_tail", &DensityMatrix::truncation_tail)
      .def_property_readonly("dim", &DensityMatrix::dim);

  m.def("coherent_state", &coherent_state, py::arg("alpha"), py::arg("dim"),
        py::arg("tail_tol") = 1e-8);
  m.def("thermal_state", &thermal_state, py::arg("nbar"), py::arg("dim"),
        py::arg("tail_tol") = 1e-8);
  m.def("squeezed_vacuum", &squeezed_vacuum, py::arg("target"),
        py::arg("dim"), py::arg("tail_tol") = 1e-8);
  m.def("projector", &projector, py::arg("state"));
  m.def("fidelity", &fidelity, py::arg("rho"), py::arg("psi"));
  m.def("purity", &purity, py::arg("rho"));
  m.def("trace_distance", &trace_distance, py::arg("rho1"), py::arg("rho2"));
  m.def(
      "ladder",
      [](int dim) {
        const Ladder l = ladder(dim);
        return py::make_tuple(l.a, l.a_dag, l.number);
      },
      py::arg("dim"), "Returns (a, a_dag, number) as dense matrices");
  m.def("exp_taylor", &exp_taylor, py::arg("matrix"), py::arg("tol") = 1e-12);

  m.def("build_projected_operator", &build_projected_operator,
        py::arg("params"), py::arg("dim"));
  m.def("choose_dim", &choose_dim, py::arg("target"), py::arg("tol"));
  m.def("squeezed_tail_mass", &squeezed_tail_mass, py::arg("target"),
        py::arg("dim"));

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("n", &TraceRow::n)
      .def_readonly("step_prob", &TraceRow::step_prob)
      .def_readonly("cum_prob", &TraceRow::cum_prob)
      .def_readonly("fidelity", &TraceRow::fidelity)
      .def_readonly("purity", &TraceRow::purity);

  py::class_<SimulationTrace>(m, "SimulationTrace")
      .def_readonly("rows", &SimulationTrace::rows)
      .def_readonly("target", &SimulationTrace::target)
      .def_readonly("dim", &SimulationTrace::dim);

  m.def("run", &run, py::arg("params"), py::arg("rho0"), py::arg("n_steps"),
        py::arg("dim"));

  py::class_<QuadratureOperator>(m, "QuadratureOperator")
      .def_readonly("v", &QuadratureOperator::v)
      .def_readonly("nodes_used", &QuadratureOperator::nodes_used)
      .def_readonly("last_delta", &QuadratureOperator::last_delta);

  m.def("momentum_quadrature_operator", &momentum_quadrature_operator,
        py::arg("params"), py::arg("dim"), py::arg("k_start") = 100,
        py::arg("tol") = 1e-9);

  py::class_<FactoredForm>(m, "FactoredForm")
      .def_readonly("x", &FactoredForm::x)
      .def_readonly("y", &FactoredForm::y)
      .def_readonly("z", &FactoredForm::z)
      .def_readonly("kappa", &FactoredForm::kappa);

  py::class_<UnifiedForm>(m, "UnifiedForm")
      .def_readonly("mu", &UnifiedForm::mu)
      .def_readonly("nu", &UnifiedForm::nu)
      .def_readonly("lambda_", &UnifiedForm::lambda)
      .def_readonly("kappa", &UnifiedForm::kappa);

  m.def("factorize", &factorize, py::arg("mu"), py::arg("nu"),
        py::arg("lambda_"));
  m.def("unify", &unify, py::arg("x"), py::arg("y"), py::arg("z"));

  py::class_<NormalizabilityResult>(m, "NormalizabilityResult")
      .def_readonly("ok", &NormalizabilityResult::ok)
      .def_readonly("eig_low", &NormalizabilityResult::eig_low)
      .def_readonly("eig_high", &NormalizabilityResult::eig_high);

  m.def("normalizability_check", &normalizability_check, py::arg("zeta"));

  py::class_<CrosscheckEntry>(m, "CrosscheckEntry")
      .def_readonly("n", &CrosscheckEntry::n)
      .def_readonly("eigenvalue_rel_err", &CrosscheckEntry::eigenvalue_rel_err)
      .def_readonly("residual", &CrosscheckEntry::residual)
      .def_readonly("overlap_deficit", &CrosscheckEntry::overlap_deficit)
      .def_readonly("s_n", &CrosscheckEntry::s_n)
      .def_readonly("biorth_max_offdiag",
                    &CrosscheckEntry::biorth_max_offdiag);

  py::class_<CrosscheckReport>(m, "CrosscheckReport")
      .def_readonly("entries", &CrosscheckReport::entries)
      .def_readonly("truncation_indicator",
                    &CrosscheckReport::truncation_indicator);

  m.def("eigen_crosscheck", &eigen_crosscheck, py::arg("params"),
        py::arg("dim"), py::arg("n_max"));

  m.def(
      "verify",
      [](const std::string& level) {
        const VerificationReport report = run_verification(
            level == "full" ? VerifyLevel::full : VerifyLevel::quick);
        py::list checks;
        for (const CheckResult& c : report.checks) {
          py::dict d;
          d["name"] = c.name;
          d["where"] = c.where;
          d["status"] = c.status;
          d["value"] = c.value;
          d["bound"] = c.bound;
          d["detail"] = c.detail;
          checks.append(d);
        }
        py::dict out;
        out["level"] = report.level;
        out["passed"] = report.passed();
        out["checks"] = checks;
        return out;
      },
      py::arg("level") = "quick",
      "Runs the cross-validation battery; returns a dict report");
}
