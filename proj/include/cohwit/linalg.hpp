#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

#include "cohwit/errors.hpp"

namespace cohwit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
// ||M - M^dagger||_max
inline constexpr double kHermiticity = 1e-12;
// eigenvalue floor for positive semidefiniteness
inline constexpr double kPsd = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kNorm = 1e-12;
// idempotence, orthogonality and completeness of measurement references
inline constexpr double kStructure = 1e-10;
// max cross-norm for incoherence certification
inline constexpr double kIncoherence = 1e-10;
inline constexpr double kDetection = 1e-10;
// c_m + c_n below this is treated as outside the support of rho
inline constexpr double kNullSpace = 1e-12;
inline constexpr double kGrouping = 1e-8;
}  // namespace tol

/// Throws InvalidOperator unless `m` is square, non-empty and finite.
void require_square_finite(const ComplexMatrix& m, std::string_view what);

double hermiticity_error(const ComplexMatrix& m);

/// Square matrix equal to its adjoint within tol::kHermiticity (max-norm).
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix m);

  /// Projects a computed, nearly-Hermitian matrix onto (M + M^dagger)/2.
  /// Used for results of products whose Hermiticity holds only up to rounding.
  static HermitianOperator symmetrized(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  struct Unchecked {};
  HermitianOperator(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

/// Unit-trace positive semidefinite operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianOperator op);
  explicit DensityMatrix(ComplexMatrix m) : DensityMatrix(HermitianOperator(std::move(m))) {}

  const HermitianOperator& op() const noexcept { return op_; }
  const ComplexMatrix& matrix() const noexcept { return op_.matrix(); }
  Index dim() const noexcept { return op_.dim(); }

 private:
  HermitianOperator op_;
};

/// Normalized state vector.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes);

  /// Rescales `amplitudes` to unit norm; throws InvalidState on a zero vector.
  static PureState normalized(ComplexVector amplitudes);

  const ComplexVector& amplitudes() const noexcept { return v_; }
  Index dim() const noexcept { return v_.size(); }

  /// |psi><psi|
  DensityMatrix density() const;

 private:
  ComplexVector v_;
};

struct EigenDecomposition {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // orthonormal columns
};

EigenDecomposition eigh(const HermitianOperator& m);

double min_eigenvalue(const HermitianOperator& m);

bool is_psd(const HermitianOperator& m, double tol = tol::kPsd);

/// <phi|rho|phi>
double fidelity_pure(const DensityMatrix& rho, const PureState& phi);

/// exp(-i H phi)
ComplexMatrix unitary_exp(const HermitianOperator& h, double phi);

/// Tr(A B) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace cohwit
