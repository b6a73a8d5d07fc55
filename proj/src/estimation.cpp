#include "cohwit/estimation.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace cohwit {
namespace {

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": state has dim " + std::to_string(a) +
                         ", Hamiltonian has dim " + std::to_string(b));
  }
}

}  // namespace

double DegenerateHamiltonian::reconstruction_error() const {
  ComplexMatrix sum = ComplexMatrix::Zero(dim(), dim());
  for (const auto& level : levels_) sum += level.energy * (level.basis * level.basis.adjoint());
  return (op_.matrix() - sum).norm();
}

DegenerateHamiltonian group_eigenspaces(const HermitianOperator& h, double tol) {
  if (!(tol > 0.0)) throw InvalidParameter("grouping tolerance must be positive");
  const auto [values, vectors] = eigh(h);
  const Index d = values.size();

  std::vector<EnergyLevel> levels;
  Index first = 0;
  while (first < d) {
    Index last = first;
    while (last + 1 < d && values(last + 1) - values(last) <= tol) ++last;
    if (values(last) - values(first) > tol) {
      std::vector<double> gaps;
      for (Index k = first; k < last; ++k) gaps.push_back(values(k + 1) - values(k));
      std::ostringstream msg;
      msg << "eigenvalues " << values(first) << " .. " << values(last)
          << " chain within tolerance " << tol << " but span " << values(last) - values(first)
          << "; gaps:";
      for (double g : gaps) msg << ' ' << g;
      throw DegeneracyAmbiguous(msg.str(), std::move(gaps));
    }
    const Index k = last - first + 1;
    EnergyLevel level;
    level.energy = values.segment(first, k).mean();
    level.degeneracy = static_cast<int>(k);
    level.basis = vectors.middleCols(first, k);
    levels.push_back(std::move(level));
    first = last + 1;
  }
  return DegenerateHamiltonian(h, std::move(levels), tol);
}

ProjectorSet hamiltonian_blocks(const DegenerateHamiltonian& h) {
  std::vector<ComplexMatrix> ps;
  ps.reserve(h.levels().size());
  for (const auto& level : h.levels()) ps.push_back(level.basis * level.basis.adjoint());
  return ProjectorSet(std::move(ps));
}

DensityMatrix evolve(const DensityMatrix& rho, const DegenerateHamiltonian& h, double phi) {
  require_same_dim(rho.dim(), h.dim(), "evolve");
  const ComplexMatrix u = unitary_exp(h.op(), phi);
  return DensityMatrix(HermitianOperator::symmetrized(u * rho.matrix() * u.adjoint()));
}

Estimability is_estimable(const DensityMatrix& rho, const DegenerateHamiltonian& h, double tol) {
  require_same_dim(rho.dim(), h.dim(), "estimability");
  const ProjectorSet blocks = hamiltonian_blocks(h);
  Estimability e;
  e.off_block_norm = (rho.matrix() - dephase_block(rho.matrix(), blocks)).norm();
  e.estimable = e.off_block_norm > tol;
  return e;
}

HermitianOperator sld(const DensityMatrix& rho, const DegenerateHamiltonian& h, double phi,
                      double null_tol) {
  require_same_dim(rho.dim(), h.dim(), "SLD");
  const auto [c, v] = eigh(rho.op());
  const ComplexMatrix hn = v.adjoint() * h.op().matrix() * v;
  const Index d = c.size();
  const Complex minus_2i(0.0, -2.0);

  // <m|[H, rho]|n> = (c_n - c_m) <m|H|n> in the eigenbasis of rho.
  ComplexMatrix l = ComplexMatrix::Zero(d, d);
  for (Index m = 0; m < d; ++m) {
    for (Index n = 0; n < d; ++n) {
      const double denom = c(m) + c(n);
      if (denom <= null_tol) continue;
      l(m, n) = minus_2i * (c(n) - c(m)) * hn(m, n) / denom;
    }
  }
  const ComplexMatrix u = unitary_exp(h.op(), phi) * v;
  return HermitianOperator::symmetrized(u * l * u.adjoint());
}

QfiResult qfi(const DensityMatrix& rho, const DegenerateHamiltonian& h, double null_tol) {
  require_same_dim(rho.dim(), h.dim(), "QFI");
  const auto [c, v] = eigh(rho.op());
  const ComplexMatrix hn = v.adjoint() * h.op().matrix() * v;
  const Index d = c.size();

  QfiResult r;
  r.eigen_spectrum = c;
  for (Index m = 0; m < d; ++m) {
    for (Index n = 0; n < d; ++n) {
      const double denom = c(m) + c(n);
      if (denom <= null_tol) {
        ++r.skipped_pairs;
        continue;
      }
      const double ratio = (c(n) - c(m)) / denom;
      r.value += 4.0 * c(m) * ratio * ratio * std::norm(hn(m, n));
    }
  }
  return r;
}

std::vector<SweepRow> sweep(const DensityMatrix& rho, const DegenerateHamiltonian& h,
                            const Witness& w, std::span<const double> phis) {
  require_same_dim(rho.dim(), h.dim(), "sweep");
  require_same_dim(w.op.dim(), h.dim(), "sweep witness");
  if (!w.certified) throw UncertifiedWitness("sweep requires a certified witness");
  std::vector<SweepRow> rows;
  rows.reserve(phis.size());
  for (double phi : phis) {
    const DetectionResult r = evaluate(w, evolve(rho, h, phi));
    rows.push_back({phi, r.expectation, r.detection_value});
  }
  return rows;
}

std::vector<double> phi_grid(double start, double end, int steps) {
  if (steps < 0) throw InvalidParameter("phi grid needs a non-negative number of steps");
  if (!std::isfinite(start) || !std::isfinite(end)) {
    throw InvalidParameter("phi grid bounds must be finite");
  }
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    grid.push_back(start);
  } else {
    const double step = (end - start) / (steps - 1);
    for (int i = 0; i < steps; ++i) grid.push_back(i + 1 == steps ? end : start + i * step);
  }
  return grid;
}

}  // namespace cohwit
