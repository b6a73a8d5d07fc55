#pragma once

// Seeded random fixtures shared by the unit and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cohwit/estimation.hpp"
#include "cohwit/measurements.hpp"

namespace fixture {

using cohwit::ComplexMatrix;
using cohwit::ComplexVector;
using cohwit::Index;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  Index integer(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(gen_); }

  ComplexMatrix gaussian(Index rows, Index cols) {
    ComplexMatrix g(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) g(i, j) = {normal(), normal()};
    return g;
  }

  ComplexMatrix hermitian(Index d) {
    const ComplexMatrix g = gaussian(d, d);
    return (g + g.adjoint()) / 2.0;
  }

  ComplexVector pure(Index d) {
    ComplexVector v = gaussian(d, 1).col(0);
    return v / v.norm();
  }

  ComplexMatrix density(Index d) {
    const ComplexMatrix g = gaussian(d, d);
    ComplexMatrix r = g * g.adjoint();
    return r / r.trace().real();
  }

  // Haar-ish unitary: Q of a Gaussian matrix with the phases of R's diagonal removed.
  ComplexMatrix unitary(Index d) {
    Eigen::HouseholderQR<ComplexMatrix> qr(gaussian(d, d));
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < d; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
    return q;
  }

  // Positive part sizes summing to d.
  std::vector<Index> partition(Index d) {
    std::vector<Index> sizes;
    Index left = d;
    while (left > 0) {
      const Index k = integer(1, left);
      sizes.push_back(k);
      left -= k;
    }
    return sizes;
  }

  // Block projectors for a random partition, in a random basis unless `diagonal`.
  std::vector<ComplexMatrix> block_projectors(Index d, bool diagonal = false) {
    const ComplexMatrix u = diagonal ? ComplexMatrix::Identity(d, d) : unitary(d);
    std::vector<ComplexMatrix> ps;
    Index start = 0;
    for (Index k : partition(d)) {
      const auto cols = u.middleCols(start, k);
      ps.push_back(cols * cols.adjoint());
      start += k;
    }
    return ps;
  }

  // Spectrum with repeated O(1) entries, conjugated by a random unitary.
  ComplexMatrix degenerate_hamiltonian(Index d) {
    Eigen::VectorXd spec(d);
    Index i = 0;
    double e = uniform(-1.0, 0.0);
    for (Index k : partition(d)) {
      for (Index g = 0; g < k; ++g) spec(i++) = e;
      e += uniform(0.5, 1.5);
    }
    const ComplexMatrix u = unitary(d);
    ComplexMatrix h = u * spec.cast<std::complex<double>>().asDiagonal() * u.adjoint();
    return (h + h.adjoint()) / 2.0;
  }

 private:
  std::mt19937_64 gen_;
};

// POVM commuting with a block structure: E_i = sum_s a_is P_s. Blocks listed
// in `sharp` get a_is = 1 for a single i; the rest are spread over every
// outcome. Incoherent states live on the sharp blocks.
struct CommutingPovm {
  std::vector<ComplexMatrix> blocks;
  std::vector<ComplexMatrix> effects;
  std::vector<std::size_t> sharp;
};

inline CommutingPovm commuting_povm(Rng& rng, Index d, std::size_t outcomes) {
  CommutingPovm out;
  out.blocks = rng.block_projectors(d);
  const std::size_t n = out.blocks.size();
  std::vector<std::vector<double>> a(outcomes, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    const bool is_sharp = s == 0 || rng.uniform(0, 1) < 0.5;
    if (is_sharp) {
      a[static_cast<std::size_t>(rng.integer(0, Index(outcomes) - 1))][s] = 1.0;
      out.sharp.push_back(s);
    } else {
      double total = 0;
      for (std::size_t i = 0; i < outcomes; ++i) total += (a[i][s] = rng.uniform(0.1, 1.0));
      for (std::size_t i = 0; i < outcomes; ++i) a[i][s] /= total;
    }
  }
  for (std::size_t i = 0; i < outcomes; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    for (std::size_t s = 0; s < n; ++s) e += a[i][s] * out.blocks[s];
    // Outcomes that received no weight would be zero effects.
    if (e.norm() > 0) out.effects.push_back(e);
  }
  return out;
}

// Block-diagonal state supported on the sharp blocks of `c`.
inline ComplexMatrix sharp_incoherent_state(Rng& rng, const CommutingPovm& c) {
  const Index d = c.blocks.front().rows();
  const ComplexMatrix rho = rng.density(d);
  ComplexMatrix delta = ComplexMatrix::Zero(d, d);
  for (std::size_t s : c.sharp) delta += c.blocks[s] * rho * c.blocks[s];
  delta /= delta.trace().real();
  return (delta + delta.adjoint()) / 2.0;
}

}  // namespace fixture
