#pragma once

#include <span>
#include <vector>

#include "cohwit/linalg.hpp"
#include "cohwit/measurements.hpp"
#include "cohwit/witness.hpp"

namespace cohwit {

struct EnergyLevel {
  double energy = 0.0;  // cluster mean
  int degeneracy = 0;
  ComplexMatrix basis;  // dim x degeneracy, orthonormal columns
};

/// Hermitian H with its spectrum grouped into degenerate eigenspaces.
/// Produced by group_eigenspaces().
class DegenerateHamiltonian {
 public:
  const HermitianOperator& op() const noexcept { return op_; }
  const std::vector<EnergyLevel>& levels() const noexcept { return levels_; }
  double grouping_tol() const noexcept { return grouping_tol_; }
  Index dim() const noexcept { return op_.dim(); }

  /// ||H - sum_s E_s P_s||_F with the representative (mean) energies.
  double reconstruction_error() const;

 private:
  friend DegenerateHamiltonian group_eigenspaces(const HermitianOperator&, double);
  DegenerateHamiltonian(HermitianOperator op, std::vector<EnergyLevel> levels, double tol)
      : op_(std::move(op)), levels_(std::move(levels)), grouping_tol_(tol) {}

  HermitianOperator op_;
  std::vector<EnergyLevel> levels_;
  double grouping_tol_;
};

/// Single-linkage clustering of the ascending spectrum: neighbours closer than
/// `tol` share a level. Throws DegeneracyAmbiguous when a chained cluster
/// spans more than `tol`.
DegenerateHamiltonian group_eigenspaces(const HermitianOperator& h, double tol = tol::kGrouping);

/// Eigenspace projectors P_s = sum_g |s,g><s,g|.
ProjectorSet hamiltonian_blocks(const DegenerateHamiltonian& h);

/// U rho U^dagger with U = exp(-i H phi).
DensityMatrix evolve(const DensityMatrix& rho, const DegenerateHamiltonian& h, double phi);

struct Estimability {
  bool estimable = false;
  double off_block_norm = 0.0;  // ||rho - Dtilde(rho)||_F over the eigenspace blocks
};

/// A phase can be read out of U rho U^dagger iff rho has coherence between
/// distinct eigenspaces of H.
Estimability is_estimable(const DensityMatrix& rho, const DegenerateHamiltonian& h,
                          double tol = tol::kIncoherence);

/// Symmetric logarithmic derivative L_phi of rho_phi = U rho U^dagger,
/// satisfying d rho_phi / d phi = (L rho_phi + rho_phi L) / 2 on the support.
/// Eigenpairs of rho with c_m + c_n <= null_tol are dropped.
HermitianOperator sld(const DensityMatrix& rho, const DegenerateHamiltonian& h, double phi,
                      double null_tol = tol::kNullSpace);

struct QfiResult {
  double value = 0.0;
  RealVector eigen_spectrum;  // eigenvalues of rho_in, ascending
  int skipped_pairs = 0;      // ordered (m, n) pairs with c_m + c_n <= null_tol
};

/// F_q = sum_{m,n} 4 c_m ((c_n - c_m)/(c_n + c_m))^2 |<m|H|n>|^2, evaluated in
/// the eigenbasis of rho_in. Independent of phi.
QfiResult qfi(const DensityMatrix& rho, const DegenerateHamiltonian& h,
              double null_tol = tol::kNullSpace);

struct SweepRow {
  double phi = 0.0;
  double expectation = 0.0;
  double detection_value = 0.0;
};

/// Tr(rho_phi W) for each phi, in grid order.
std::vector<SweepRow> sweep(const DensityMatrix& rho, const DegenerateHamiltonian& h,
                            const Witness& w, std::span<const double> phis);

/// `steps` evenly spaced points from start to end inclusive; one point gives
/// {start}, zero gives an empty grid.
std::vector<double> phi_grid(double start, double end, int steps);

}  // namespace cohwit
