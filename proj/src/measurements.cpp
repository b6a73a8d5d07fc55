#include "cohwit/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace cohwit {
namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Index common_dim(const std::vector<ComplexMatrix>& ops) {
  if (ops.empty()) throw InvalidMeasurement("nonempty", std::nullopt, "no operators given");
  const Index d = ops.front().rows();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& op = ops[i];
    if (op.rows() == 0 || op.rows() != op.cols() || op.rows() != d) {
      throw InvalidMeasurement("dimension", i,
                               "expected " + std::to_string(d) + "x" + std::to_string(d) +
                                   ", got " + std::to_string(op.rows()) + "x" +
                                   std::to_string(op.cols()));
    }
    if (!op.allFinite()) throw InvalidMeasurement("finite", i, "non-finite entries");
    const double herr = hermiticity_error(op);
    if (herr > tol::kHermiticity) {
      throw InvalidMeasurement("hermitian", i, "||M - M^dagger||_max = " + num(herr));
    }
  }
  return d;
}

void require_complete(const std::vector<ComplexMatrix>& ops, Index d, double tol) {
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& op : ops) sum += op;
  const double err = (sum - ComplexMatrix::Identity(d, d)).norm();
  if (err > tol) {
    throw InvalidMeasurement("complete", std::nullopt, "||sum - I||_F = " + num(err));
  }
}

void require_dim(Index got, Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": operand has dim " + std::to_string(got) +
                         ", reference has dim " + std::to_string(want));
  }
}

}  // namespace

ProjectorSet::ProjectorSet(std::vector<ComplexMatrix> projectors, double tol)
    : projectors_(std::move(projectors)) {
  dim_ = common_dim(projectors_);
  const std::size_t n = projectors_.size();
  ranks_.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto& p = projectors_[s];
    const double idem = (p * p - p).norm();
    if (idem > tol) throw InvalidMeasurement("idempotent", s, "||P^2 - P||_F = " + num(idem));
    const int rank = static_cast<int>(std::lround(p.trace().real()));
    if (rank == 0) throw InvalidMeasurement("nonzero", s, "projector has rank 0");
    ranks_.push_back(rank);
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      const double overlap = (projectors_[s] * projectors_[t]).norm();
      if (overlap > tol) {
        throw InvalidMeasurement("orthogonal", t,
                                 "||P_" + std::to_string(s) + " P_" + std::to_string(t) +
                                     "||_F = " + num(overlap));
      }
    }
  }
  require_complete(projectors_, dim_, tol);
}

PovmSet ProjectorSet::as_povm() const { return PovmSet(projectors_); }

PovmSet::PovmSet(std::vector<ComplexMatrix> effects, double tol) : effects_(std::move(effects)) {
  dim_ = common_dim(effects_);
  for (std::size_t i = 0; i < effects_.size(); ++i) {
    const auto& e = effects_[i];
    if (e.norm() <= tol) throw InvalidMeasurement("nonzero", i, "effect has zero norm");
    const double lmin = min_eigenvalue(HermitianOperator::symmetrized(e));
    if (lmin < -tol) {
      throw InvalidMeasurement("positive", i, "minimum eigenvalue " + num(lmin));
    }
  }
  require_complete(effects_, dim_, tol);
}

bool PovmSet::is_projective(double tol) const {
  for (const auto& e : effects_) {
    if ((e * e - e).norm() > tol) return false;
  }
  return true;
}

ReferenceKind kind_of(const Reference& ref) {
  return std::holds_alternative<ProjectorSet>(ref) ? ReferenceKind::block : ReferenceKind::povm;
}

Index dim_of(const Reference& ref) {
  return std::visit([](const auto& r) { return r.dim(); }, ref);
}

const char* to_string(ReferenceKind kind) {
  return kind == ReferenceKind::block ? "block" : "povm";
}

ProjectorSet standard_basis(Index dim) {
  if (dim < 1) throw InvalidDimension("standard basis needs dim >= 1");
  std::vector<ComplexMatrix> ps;
  ps.reserve(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) {
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    p(i, i) = 1.0;
    ps.push_back(std::move(p));
  }
  return ProjectorSet(std::move(ps));
}

ComplexMatrix dephase_block(const ComplexMatrix& rho, const ProjectorSet& p) {
  require_dim(rho.rows(), p.dim(), "block dephasing");
  require_dim(rho.cols(), p.dim(), "block dephasing");
  ComplexMatrix out = ComplexMatrix::Zero(p.dim(), p.dim());
  for (const auto& ps : p.projectors()) out.noalias() += ps * rho * ps;
  return out;
}

ComplexMatrix dephase_povm(const ComplexMatrix& rho, const PovmSet& e) {
  require_dim(rho.rows(), e.dim(), "POVM dephasing");
  require_dim(rho.cols(), e.dim(), "POVM dephasing");
  ComplexMatrix out = ComplexMatrix::Zero(e.dim(), e.dim());
  for (const auto& ei : e.effects()) out.noalias() += ei * rho * ei;
  return out;
}

ComplexMatrix dephase(const ComplexMatrix& rho, const Reference& ref) {
  if (const auto* p = std::get_if<ProjectorSet>(&ref)) return dephase_block(rho, *p);
  return dephase_povm(rho, std::get<PovmSet>(ref));
}

double max_cross_norm(const ComplexMatrix& m, const std::vector<ComplexMatrix>& ops) {
  const std::size_t n = ops.size();
  // For Hermitian m, ||K_i m K_j|| = ||K_j m K_i||, so half the pairs suffice.
  const bool symmetric = hermiticity_error(m) <= tol::kHermiticity;
  std::vector<ComplexMatrix> left;
  left.reserve(n);
  for (const auto& k : ops) left.push_back(k * m);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = symmetric ? i + 1 : 0; j < n; ++j) {
      if (i == j) continue;
      best = std::max(best, (left[i] * ops[j]).norm());
    }
  }
  return best;
}

IncoherenceReport check_block_incoherent(const DensityMatrix& rho, const ProjectorSet& p,
                                         double tol) {
  require_dim(rho.dim(), p.dim(), "block incoherence check");
  IncoherenceReport r;
  r.tol = tol;
  r.max_cross_norm = max_cross_norm(rho.matrix(), p.projectors());
  r.residual = (rho.matrix() - dephase_block(rho.matrix(), p)).norm();
  r.incoherent = r.max_cross_norm <= tol;
  return r;
}

IncoherenceReport check_povm_incoherent(const DensityMatrix& rho, const PovmSet& e, double tol) {
  require_dim(rho.dim(), e.dim(), "POVM incoherence check");
  IncoherenceReport r;
  r.tol = tol;
  r.max_cross_norm = max_cross_norm(rho.matrix(), e.effects());
  r.residual = (rho.matrix() - dephase_povm(rho.matrix(), e)).norm();
  r.incoherent = r.max_cross_norm <= tol;
  return r;
}

ProjectorSet wstate_projector_family(int n_qubits) {
  if (n_qubits < 2) throw InvalidDimension("W-state projector family needs N >= 2");
  if (n_qubits > 12) throw InvalidDimension("W-state projector family limited to N <= 12");
  const Index d = Index{1} << n_qubits;
  const Index low = 1;                            // |0..01>
  const Index high = Index{1} << (n_qubits - 1);  // |10..0>
  const double h = 1.0 / std::sqrt(2.0);

  auto outer = [](const ComplexVector& v) -> ComplexMatrix { return v * v.adjoint(); };

  std::vector<ComplexMatrix> ps;
  ps.reserve(static_cast<std::size_t>(n_qubits) + 1);
  ComplexVector minus = ComplexVector::Zero(d);
  minus(low) = h;
  minus(high) = -h;
  ComplexVector plus = ComplexVector::Zero(d);
  plus(low) = h;
  plus(high) = h;
  ps.push_back(outer(minus));
  ps.push_back(outer(plus));
  // |0..010>, |0..0100>, ..., |010..0>
  for (int k = 2; k <= n_qubits - 1; ++k) {
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    const Index idx = Index{1} << (k - 1);
    p(idx, idx) = 1.0;
    ps.push_back(std::move(p));
  }
  ComplexMatrix rest = ComplexMatrix::Identity(d, d);
  for (const auto& p : ps) rest -= p;
  ps.push_back(std::move(rest));
  return ProjectorSet(std::move(ps));
}

}  // namespace cohwit
