#include "cohwit/witness.hpp"

#include <string>

namespace cohwit {
namespace {

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dim " + std::to_string(a) +
                         " does not match reference dim " + std::to_string(b));
  }
}

double dephased_min(const HermitianOperator& w, const Reference& ref) {
  return min_eigenvalue(HermitianOperator::symmetrized(dephase(w.matrix(), ref)));
}

bool projective(const Reference& ref) {
  if (const auto* e = std::get_if<PovmSet>(&ref)) return e->is_projective();
  return true;
}

}  // namespace

Witness construct_witness(const HermitianOperator& a, const Reference& ref) {
  require_same_dim(a.dim(), dim_of(ref), "witness construction");
  auto w = HermitianOperator::symmetrized(dephase(a.matrix(), ref) - a.matrix());
  const double lmin = dephased_min(w, ref);
  const bool psd = lmin >= -tol::kPsd;
  // dephase(W) vanishes identically when the map is idempotent. Non-projective
  // POVM dephasing is not, yet W keeps zero mean on incoherent states.
  Witness out{std::move(w), ref, true, lmin, CertificationBasis::dephased_psd, std::nullopt};
  if (!psd) {
    if (projective(ref)) {
      out.certified = false;
    } else {
      out.basis = CertificationBasis::construction;
    }
  }
  return out;
}

Witness certify_witness(const HermitianOperator& w, const Reference& ref, double tol) {
  require_same_dim(w.dim(), dim_of(ref), "witness certification");
  if (!(tol >= 0.0)) throw InvalidParameter("certification tolerance must be non-negative");
  const double lmin = dephased_min(w, ref);
  return Witness{w, ref, lmin >= -tol, lmin, CertificationBasis::dephased_psd, std::nullopt};
}

DetectionResult evaluate(const Witness& w, const DensityMatrix& rho, double detection_tol) {
  if (!w.certified) {
    throw UncertifiedWitness("operator is not a certified witness for this reference "
                             "(min eigenvalue of its dephasing is " +
                             std::to_string(w.dephased_min_eigenvalue) + ")");
  }
  require_same_dim(rho.dim(), w.op.dim(), "witness evaluation");
  DetectionResult r;
  r.expectation = trace_product(rho.matrix(), w.op.matrix()).real();
  r.detection_value = -r.expectation;
  r.detected = r.expectation < -detection_tol;
  if (w.source) {
    const auto& v = w.source->amplitudes();
    r.fidelity_dephased = v.dot(dephase(rho.matrix(), w.reference) * v).real();
    r.fidelity_raw = fidelity_pure(rho, *w.source);
  }
  return r;
}

Witness witness_from_pure(const PureState& phi, const Reference& ref) {
  require_same_dim(phi.dim(), dim_of(ref), "witness construction");
  Witness w = construct_witness(phi.density().op(), ref);
  w.source = phi;
  return w;
}

std::optional<DensityMatrix> violating_state(const HermitianOperator& w, const ProjectorSet& p,
                                             double tol) {
  require_same_dim(w.dim(), p.dim(), "violating state");
  const auto [values, vectors] = eigh(HermitianOperator::symmetrized(dephase_block(w.matrix(), p)));
  if (values(0) >= -tol) return std::nullopt;
  const ComplexVector v = vectors.col(0);
  return DensityMatrix(HermitianOperator::symmetrized(dephase_block(v * v.adjoint(), p)));
}

std::optional<PovmCertificate> violating_certificate(const HermitianOperator& w,
                                                     const PovmSet& e, double tol) {
  require_same_dim(w.dim(), e.dim(), "violating certificate");
  const auto [values, vectors] = eigh(HermitianOperator::symmetrized(dephase_povm(w.matrix(), e)));
  if (values(0) >= -tol) return std::nullopt;
  const ComplexVector v = vectors.col(0);
  PovmCertificate c;
  c.state = dephase_povm(v * v.adjoint(), e);
  c.trace = c.state.trace().real();
  c.max_cross_norm = max_cross_norm(c.state, e.effects());
  c.expectation = trace_product(c.state, w.matrix()).real();
  c.verified_incoherent = e.is_projective() && c.max_cross_norm <= tol::kIncoherence;
  return c;
}

}  // namespace cohwit
