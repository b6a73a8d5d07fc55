#pragma once

#include <optional>

#include "cohwit/linalg.hpp"
#include "cohwit/measurements.hpp"

namespace cohwit {

/// How a witness earned its `certified` flag.
enum class CertificationBasis {
  /// dephase(W) >= -tol. Necessary and sufficient for block references and
  /// projective POVMs; only sufficient for non-projective POVMs.
  dephased_psd,
  /// W = dephase(A) - A has zero mean on every incoherent state, which holds
  /// for any reference kind regardless of the spectrum of dephase(W).
  construction,
};

struct Witness {
  HermitianOperator op;
  Reference reference;
  bool certified = false;
  double dephased_min_eigenvalue = 0.0;
  CertificationBasis basis = CertificationBasis::dephased_psd;
  // Set when built from a pure state; enables the fidelity fields of evaluate().
  std::optional<PureState> source;

  ReferenceKind kind() const { return kind_of(reference); }
};

struct DetectionResult {
  double expectation = 0.0;      // Tr(rho W)
  double detection_value = 0.0;  // -Tr(rho W)
  bool detected = false;
  std::optional<double> fidelity_dephased;  // <phi|dephase(rho)|phi>
  std::optional<double> fidelity_raw;       // <phi|rho|phi>
};

/// W = dephase(A) - A for the reference kind.
Witness construct_witness(const HermitianOperator& a, const Reference& ref);

/// Decides witness status from the spectrum of dephase(W).
Witness certify_witness(const HermitianOperator& w, const Reference& ref,
                        double tol = tol::kPsd);

/// Throws UncertifiedWitness if `w.certified` is false.
DetectionResult evaluate(const Witness& w, const DensityMatrix& rho,
                         double detection_tol = tol::kDetection);

/// construct_witness with A = |phi><phi|; remembers phi for fidelity reporting.
Witness witness_from_pure(const PureState& phi, const Reference& ref);

/// For a non-witness W, the block-incoherent state delta = Dtilde(|v><v|)
/// built from the eigenvector of the most negative eigenvalue of Dtilde(W).
/// Tr(delta W) equals that eigenvalue. Empty when Dtilde(W) >= -tol.
std::optional<DensityMatrix> violating_state(const HermitianOperator& w, const ProjectorSet& p,
                                             double tol = tol::kPsd);

/// POVM analogue of violating_state. Dbar(|v><v|) is generally neither unit
/// trace nor exactly incoherent for non-projective POVMs, so it is returned
/// raw together with the quantities needed to judge it.
struct PovmCertificate {
  ComplexMatrix state;       // Dbar(|v><v|)
  double trace = 0.0;
  double max_cross_norm = 0.0;
  double expectation = 0.0;  // Tr(state W) = lambda_min(Dbar(W))
  // False for non-projective POVMs: the incoherence of `state` is asserted by
  // the converse argument but not established numerically.
  bool verified_incoherent = false;
};

std::optional<PovmCertificate> violating_certificate(const HermitianOperator& w,
                                                     const PovmSet& e,
                                                     double tol = tol::kPsd);

}  // namespace cohwit
