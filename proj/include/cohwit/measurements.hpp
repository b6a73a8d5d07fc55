#pragma once

#include <variant>
#include <vector>

#include "cohwit/linalg.hpp"

namespace cohwit {

class PovmSet;

/// Complete family of mutually orthogonal projectors {P_s}, sum_s P_s = 1.
class ProjectorSet {
 public:
  /// Validates Hermiticity, idempotence, mutual orthogonality, completeness
  /// and non-zero rank; throws InvalidMeasurement naming the failed invariant.
  explicit ProjectorSet(std::vector<ComplexMatrix> projectors, double tol = tol::kStructure);

  Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return projectors_.size(); }
  const std::vector<ComplexMatrix>& projectors() const noexcept { return projectors_; }
  const ComplexMatrix& operator[](std::size_t s) const { return projectors_[s]; }
  const std::vector<int>& ranks() const noexcept { return ranks_; }

  PovmSet as_povm() const;

 private:
  Index dim_ = 0;
  std::vector<ComplexMatrix> projectors_;
  std::vector<int> ranks_;
};

/// Complete family of positive operators {E_i}, sum_i E_i = 1.
class PovmSet {
 public:
  explicit PovmSet(std::vector<ComplexMatrix> effects, double tol = tol::kStructure);

  Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return effects_.size(); }
  const std::vector<ComplexMatrix>& effects() const noexcept { return effects_; }
  const ComplexMatrix& operator[](std::size_t i) const { return effects_[i]; }

  /// True when every effect is idempotent (and hence, by completeness, the
  /// effects are mutually orthogonal projectors).
  bool is_projective(double tol = tol::kStructure) const;

 private:
  Index dim_ = 0;
  std::vector<ComplexMatrix> effects_;
};

/// Measurement reference of a witness: block (projective) or general POVM.
using Reference = std::variant<ProjectorSet, PovmSet>;

enum class ReferenceKind { block, povm };

ReferenceKind kind_of(const Reference& ref);
Index dim_of(const Reference& ref);
const char* to_string(ReferenceKind kind);

struct IncoherenceReport {
  bool incoherent = false;
  double max_cross_norm = 0.0;  // max_{i != i'} ||K_i rho K_i'||_F
  double residual = 0.0;        // ||rho - dephase(rho)||_F
  double tol = tol::kIncoherence;
};

/// Rank-1 projectors |i><i| of the computational basis.
ProjectorSet standard_basis(Index dim);

/// sum_s P_s rho P_s
ComplexMatrix dephase_block(const ComplexMatrix& rho, const ProjectorSet& p);

/// sum_i E_i rho E_i. Not trace preserving for non-projective POVMs; the
/// result is returned as is.
ComplexMatrix dephase_povm(const ComplexMatrix& rho, const PovmSet& e);

/// Dispatches to the dephasing map matching the reference kind.
ComplexMatrix dephase(const ComplexMatrix& rho, const Reference& ref);

IncoherenceReport check_block_incoherent(const DensityMatrix& rho, const ProjectorSet& p,
                                         double tol = tol::kIncoherence);

IncoherenceReport check_povm_incoherent(const DensityMatrix& rho, const PovmSet& e,
                                        double tol = tol::kIncoherence);

/// Largest Frobenius cross term ||E_i m E_i'||_F over ordered pairs i != i'.
double max_cross_norm(const ComplexMatrix& m, const std::vector<ComplexMatrix>& ops);

/// Block reference for N-qubit W states on 2^N dimensions:
///   P_0 = |phi-><phi-|, P_1 = |phi+><phi+| with
///   |phi+-> = (|0..01> +- |10..0>)/sqrt(2),
///   P_2..P_{N-1} = |0..010><0..010| up to |010..0><010..0|,
///   P_N = 1 - sum of the others.
/// Basis index is the big-endian reading of the ket, so |10..0> = 2^(N-1).
ProjectorSet wstate_projector_family(int n_qubits);

}  // namespace cohwit
