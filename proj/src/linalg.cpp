#include "cohwit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cohwit {

void require_square_finite(const ComplexMatrix& m, std::string_view what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidOperator(std::string(what) + " must be a non-empty square matrix, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw InvalidOperator(std::string(what) + " has non-finite entries");
  }
}

double hermiticity_error(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  require_square_finite(m_, "operator");
  const double err = hermiticity_error(m_);
  if (err > tol::kHermiticity) {
    throw InvalidOperator("operator is not Hermitian: ||M - M^dagger||_max = " +
                          std::to_string(err));
  }
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& m) {
  require_square_finite(m, "operator");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  return HermitianOperator(std::move(h), Unchecked{});
}

DensityMatrix::DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
  const Complex tr = op_.matrix().trace();
  if (std::abs(tr - 1.0) > tol::kTrace) {
    throw InvalidState("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  const double lmin = min_eigenvalue(op_);
  if (lmin < -tol::kPsd) {
    throw InvalidState("density matrix has negative eigenvalue " + std::to_string(lmin));
  }
}

PureState::PureState(ComplexVector amplitudes) : v_(std::move(amplitudes)) {
  if (v_.size() == 0) throw InvalidState("state vector is empty");
  if (!v_.allFinite()) throw InvalidState("state vector has non-finite entries");
  const double norm = v_.norm();
  if (std::abs(norm - 1.0) > tol::kNorm) {
    throw InvalidState("state vector norm is " + std::to_string(norm) + ", expected 1");
  }
}

PureState PureState::normalized(ComplexVector amplitudes) {
  if (amplitudes.size() == 0 || !amplitudes.allFinite()) {
    throw InvalidState("state vector is empty or non-finite");
  }
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw InvalidState("cannot normalize the zero vector");
  amplitudes /= norm;
  return PureState(std::move(amplitudes));
}

DensityMatrix PureState::density() const {
  return DensityMatrix(HermitianOperator::symmetrized(v_ * v_.adjoint()));
}

EigenDecomposition eigh(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw InvalidOperator("Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw InvalidOperator("Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues()(0);
}

bool is_psd(const HermitianOperator& m, double tol) {
  if (!(tol >= 0.0)) throw InvalidParameter("PSD tolerance must be non-negative");
  return min_eigenvalue(m) >= -tol;
}

double fidelity_pure(const DensityMatrix& rho, const PureState& phi) {
  if (rho.dim() != phi.dim()) {
    throw DimensionError("fidelity: state has dim " + std::to_string(rho.dim()) +
                         ", target has dim " + std::to_string(phi.dim()));
  }
  const auto& v = phi.amplitudes();
  const double f = v.dot(rho.matrix() * v).real();
  // Rounding may push the overlap marginally outside [0, 1].
  if (f < 0.0 && f >= -tol::kPsd) return 0.0;
  if (f > 1.0 && f <= 1.0 + tol::kPsd) return 1.0;
  return f;
}

ComplexMatrix unitary_exp(const HermitianOperator& h, double phi) {
  const auto [values, vectors] = eigh(h);
  ComplexVector phases(values.size());
  for (Index k = 0; k < values.size(); ++k) {
    phases(k) = std::polar(1.0, -values(k) * phi);
  }
  return vectors * phases.asDiagonal() * vectors.adjoint();
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Tr(AB) = sum_ij A_ij B_ji
  return a.cwiseProduct(b.transpose()).sum();
}

}  // namespace cohwit
