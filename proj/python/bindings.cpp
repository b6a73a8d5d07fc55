#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cohwit/estimation.hpp"
#include "cohwit/measurements.hpp"
#include "cohwit/states.hpp"
#include "cohwit/witness.hpp"

namespace py = pybind11;
using namespace cohwit;

namespace {

HermitianOperator herm(const ComplexMatrix& m) { return HermitianOperator(m); }
DensityMatrix dens(const ComplexMatrix& m) { return DensityMatrix(m); }
PureState pure(const ComplexVector& v) { return PureState(v); }

// std::variant casting needs default-constructible alternatives, which the
// validated measurement types are not.
Reference to_ref(const py::handle& h) {
  if (py::isinstance<ProjectorSet>(h)) return h.cast<ProjectorSet>();
  if (py::isinstance<PovmSet>(h)) return h.cast<PovmSet>();
  throw py::type_error("reference must be a ProjectorSet or PovmSet");
}

const char* basis_name(CertificationBasis b) {
  return b == CertificationBasis::construction ? "construction" : "dephased_psd";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coherence witnesses for block and POVM measurements; QFI with degenerate Hamiltonians";

  auto base = py::register_exception<Error>(m, "CohwitError", PyExc_ValueError);
  py::register_exception<InvalidOperator>(m, "InvalidOperator", base);
  py::register_exception<InvalidDimension>(m, "InvalidDimension", base);
  py::register_exception<DimensionError>(m, "DimensionError", base);
  py::register_exception<InvalidState>(m, "InvalidState", base);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base);
  py::register_exception<UncertifiedWitness>(m, "UncertifiedWitness", base);
  py::register_exception<InvalidMeasurement>(m, "InvalidMeasurement", base);
  py::register_exception<DegeneracyAmbiguous>(m, "DegeneracyAmbiguous", base);
  py::register_exception<FormatError>(m, "FormatError", base);

  // linalg
  m.def("eigh", [](const ComplexMatrix& a) {
        auto e = eigh(herm(a));
        return py::make_tuple(e.values, e.vectors);
      }, py::arg("matrix"), "Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix");
  m.def("is_psd", [](const ComplexMatrix& a, double tol) { return is_psd(herm(a), tol); },
        py::arg("matrix"), py::arg("tol") = tol::kPsd);
  m.def("fidelity_pure", [](const ComplexMatrix& rho, const ComplexVector& phi) {
        return fidelity_pure(dens(rho), pure(phi));
      }, py::arg("rho"), py::arg("phi"));
  m.def("unitary_exp", [](const ComplexMatrix& h, double phi) { return unitary_exp(herm(h), phi); },
        py::arg("hamiltonian"), py::arg("phi"), "exp(-i H phi)");

  // measurements
  py::class_<ProjectorSet>(m, "ProjectorSet")
      .def(py::init<std::vector<ComplexMatrix>, double>(), py::arg("projectors"),
           py::arg("tol") = tol::kStructure)
      .def_property_readonly("dim", &ProjectorSet::dim)
      .def_property_readonly("projectors", &ProjectorSet::projectors)
      .def_property_readonly("ranks", &ProjectorSet::ranks)
      .def("as_povm", &ProjectorSet::as_povm)
      .def("__len__", &ProjectorSet::size);
  py::class_<PovmSet>(m, "PovmSet")
      .def(py::init<std::vector<ComplexMatrix>, double>(), py::arg("effects"),
           py::arg("tol") = tol::kStructure)
      .def_property_readonly("dim", &PovmSet::dim)
      .def_property_readonly("effects", &PovmSet::effects)
      .def("is_projective", &PovmSet::is_projective, py::arg("tol") = tol::kStructure)
      .def("__len__", &PovmSet::size);
  py::class_<IncoherenceReport>(m, "IncoherenceReport")
      .def_readonly("incoherent", &IncoherenceReport::incoherent)
      .def_readonly("max_cross_norm", &IncoherenceReport::max_cross_norm)
      .def_readonly("residual", &IncoherenceReport::residual)
      .def_readonly("tol", &IncoherenceReport::tol);

  m.def("standard_basis", &standard_basis, py::arg("dim"));
  m.def("wstate_projector_family", &wstate_projector_family, py::arg("n_qubits"));
  m.def("dephase_block", &dephase_block, py::arg("rho"), py::arg("projectors"));
  m.def("dephase_povm", &dephase_povm, py::arg("rho"), py::arg("povm"));
  m.def("check_block_incoherent", [](const ComplexMatrix& rho, const ProjectorSet& p, double tol) {
        return check_block_incoherent(dens(rho), p, tol);
      }, py::arg("rho"), py::arg("projectors"), py::arg("tol") = tol::kIncoherence);
  m.def("check_povm_incoherent", [](const ComplexMatrix& rho, const PovmSet& e, double tol) {
        return check_povm_incoherent(dens(rho), e, tol);
      }, py::arg("rho"), py::arg("povm"), py::arg("tol") = tol::kIncoherence);

  // witness
  py::class_<Witness>(m, "Witness")
      .def_property_readonly("operator", [](const Witness& w) { return w.op.matrix(); })
      .def_readonly("certified", &Witness::certified)
      .def_readonly("dephased_min_eigenvalue", &Witness::dephased_min_eigenvalue)
      .def_property_readonly("basis", [](const Witness& w) { return basis_name(w.basis); })
      .def_property_readonly("kind", [](const Witness& w) { return to_string(w.kind()); });
  py::class_<DetectionResult>(m, "DetectionResult")
      .def_readonly("expectation", &DetectionResult::expectation)
      .def_readonly("detection_value", &DetectionResult::detection_value)
      .def_readonly("detected", &DetectionResult::detected)
      .def_readonly("fidelity_dephased", &DetectionResult::fidelity_dephased)
      .def_readonly("fidelity_raw", &DetectionResult::fidelity_raw);

  m.def("construct_witness", [](const ComplexMatrix& a, const py::object& ref) {
        return construct_witness(herm(a), to_ref(ref));
      }, py::arg("operator"), py::arg("reference"));
  m.def("certify_witness", [](const ComplexMatrix& w, const py::object& ref, double tol) {
        return certify_witness(herm(w), to_ref(ref), tol);
      }, py::arg("operator"), py::arg("reference"), py::arg("tol") = tol::kPsd);
  m.def("evaluate", [](const Witness& w, const ComplexMatrix& rho) { return evaluate(w, dens(rho)); },
        py::arg("witness"), py::arg("rho"));
  m.def("witness_from_pure", [](const ComplexVector& phi, const py::object& ref) {
        return witness_from_pure(pure(phi), to_ref(ref));
      }, py::arg("phi"), py::arg("reference"));
  m.def("violating_state", [](const ComplexMatrix& w, const ProjectorSet& p,
                              double tol) -> std::optional<ComplexMatrix> {
        auto d = violating_state(herm(w), p, tol);
        if (!d) return std::nullopt;
        return d->matrix();
      }, py::arg("operator"), py::arg("projectors"), py::arg("tol") = tol::kPsd);

  // estimation
  py::class_<DegenerateHamiltonian>(m, "DegenerateHamiltonian")
      .def_property_readonly("operator", [](const DegenerateHamiltonian& h) { return h.op().matrix(); })
      .def_property_readonly("levels", [](const DegenerateHamiltonian& h) {
        py::list out;
        for (const auto& l : h.levels()) out.append(py::make_tuple(l.energy, l.degeneracy, l.basis));
        return out;
      })
      .def_property_readonly("grouping_tol", &DegenerateHamiltonian::grouping_tol)
      .def("reconstruction_error", &DegenerateHamiltonian::reconstruction_error);
  py::class_<QfiResult>(m, "QfiResult")
      .def_readonly("value", &QfiResult::value)
      .def_readonly("eigen_spectrum", &QfiResult::eigen_spectrum)
      .def_readonly("skipped_pairs", &QfiResult::skipped_pairs);

  m.def("group_eigenspaces", [](const ComplexMatrix& h, double tol) {
        return group_eigenspaces(herm(h), tol);
      }, py::arg("hamiltonian"), py::arg("tol") = tol::kGrouping);
  m.def("hamiltonian_blocks", &hamiltonian_blocks, py::arg("hamiltonian"));
  m.def("evolve", [](const ComplexMatrix& rho, const DegenerateHamiltonian& h, double phi) {
        return evolve(dens(rho), h, phi).matrix();
      }, py::arg("rho"), py::arg("hamiltonian"), py::arg("phi"));
  m.def("is_estimable", [](const ComplexMatrix& rho, const DegenerateHamiltonian& h, double tol) {
        auto e = is_estimable(dens(rho), h, tol);
        return py::make_tuple(e.estimable, e.off_block_norm);
      }, py::arg("rho"), py::arg("hamiltonian"), py::arg("tol") = tol::kIncoherence);
  m.def("sld", [](const ComplexMatrix& rho, const DegenerateHamiltonian& h, double phi) {
        return sld(dens(rho), h, phi).matrix();
      }, py::arg("rho"), py::arg("hamiltonian"), py::arg("phi"));
  m.def("qfi", [](const ComplexMatrix& rho, const DegenerateHamiltonian& h) {
        return qfi(dens(rho), h);
      }, py::arg("rho"), py::arg("hamiltonian"));
  m.def("sweep", [](const ComplexMatrix& rho, const DegenerateHamiltonian& h, const Witness& w,
                    const std::vector<double>& phis) {
        py::list out;
        for (const auto& r : sweep(dens(rho), h, w, phis)) {
          out.append(py::make_tuple(r.phi, r.expectation, r.detection_value));
        }
        return out;
      }, py::arg("rho"), py::arg("hamiltonian"), py::arg("witness"), py::arg("phis"));

  // states
  m.def("w_state", [](int n) { return w_state(n).amplitudes(); }, py::arg("n_qubits"));
  m.def("noisy_w_state", [](int n, double p) { return noisy_w_state(n, p).matrix(); },
        py::arg("n_qubits"), py::arg("p"));
  m.def("random_density", [](Index d, std::uint64_t seed) { return random_density(d, seed).matrix(); },
        py::arg("dim"), py::arg("seed"));
  m.def("random_block_incoherent", [](const ProjectorSet& p, std::uint64_t seed) {
        return random_block_incoherent(p, seed).matrix();
      }, py::arg("projectors"), py::arg("seed"));
}
