#include "cohwit/states.hpp"

#include <cmath>
#include <random>
#include <string>

namespace cohwit {
namespace {

void require_qubits(int n) {
  if (n < 2) throw InvalidDimension("W states need N >= 2 qubits, got " + std::to_string(n));
  if (n > 12) throw InvalidDimension("W states limited to N <= 12 qubits");
}

}  // namespace

PureState w_state(int n_qubits) {
  require_qubits(n_qubits);
  const Index d = Index{1} << n_qubits;
  ComplexVector v = ComplexVector::Zero(d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_qubits));
  for (int k = 0; k < n_qubits; ++k) v(Index{1} << k) = amp;
  return PureState::normalized(std::move(v));
}

DensityMatrix noisy_w_state(int n_qubits, double p) {
  require_qubits(n_qubits);
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidParameter("mixing weight p must lie in [0, 1], got " + std::to_string(p));
  }
  const ComplexVector w = w_state(n_qubits).amplitudes();
  const Index d = w.size();
  ComplexMatrix m = p * (w * w.adjoint());
  m.diagonal().array() += (1.0 - p) / static_cast<double>(d);
  return DensityMatrix(HermitianOperator::symmetrized(m));
}

DensityMatrix maximally_mixed(Index dim) {
  if (dim < 1) throw InvalidDimension("dimension must be >= 1");
  ComplexMatrix m = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
  return DensityMatrix(std::move(m));
}

DensityMatrix random_density(Index dim, std::uint64_t seed) {
  if (dim < 1) throw InvalidDimension("dimension must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ComplexMatrix g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  }
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(HermitianOperator::symmetrized(m));
}

DensityMatrix random_block_incoherent(const ProjectorSet& p, std::uint64_t seed) {
  const DensityMatrix rho = random_density(p.dim(), seed);
  return DensityMatrix(HermitianOperator::symmetrized(dephase_block(rho.matrix(), p)));
}

PureState pure_from_amplitudes(const std::vector<Complex>& amplitudes) {
  ComplexVector v(static_cast<Index>(amplitudes.size()));
  for (std::size_t i = 0; i < amplitudes.size(); ++i) v(static_cast<Index>(i)) = amplitudes[i];
  return PureState::normalized(std::move(v));
}

StateKind parse_state_kind(std::string_view name) {
  if (name == "pure") return StateKind::pure;
  if (name == "wstate") return StateKind::wstate;
  if (name == "noisy_wstate") return StateKind::noisy_wstate;
  if (name == "maximally_mixed") return StateKind::maximally_mixed;
  if (name == "random") return StateKind::random;
  if (name == "random_block_incoherent") return StateKind::random_block_incoherent;
  throw InvalidParameter("unknown state kind '" + std::string(name) + "'");
}

const char* to_string(StateKind kind) {
  switch (kind) {
    case StateKind::pure: return "pure";
    case StateKind::wstate: return "wstate";
    case StateKind::noisy_wstate: return "noisy_wstate";
    case StateKind::maximally_mixed: return "maximally_mixed";
    case StateKind::random: return "random";
    case StateKind::random_block_incoherent: return "random_block_incoherent";
  }
  return "unknown";
}

DensityMatrix make_state(const StateSpec& spec) {
  switch (spec.kind) {
    case StateKind::pure:
      return pure_from_amplitudes(spec.amplitudes).density();
    case StateKind::wstate:
      return w_state(spec.qubits).density();
    case StateKind::noisy_wstate:
      return noisy_w_state(spec.qubits, spec.p);
    case StateKind::maximally_mixed:
      return maximally_mixed(spec.dim);
    case StateKind::random:
      return random_density(spec.dim, spec.seed);
    case StateKind::random_block_incoherent:
      if (!spec.reference) {
        throw InvalidParameter("random_block_incoherent needs a projector reference");
      }
      return random_block_incoherent(*spec.reference, spec.seed);
  }
  throw InvalidParameter("unhandled state kind");
}

}  // namespace cohwit
