#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cohwit/linalg.hpp"
#include "cohwit/measurements.hpp"

namespace cohwit {

/// (|0..01> + |0..10> + ... + |10..0>)/sqrt(N) on 2^N dimensions,
/// basis index = big-endian reading of the ket.
PureState w_state(int n_qubits);

/// p |W_N><W_N| + (1 - p) 1/2^N
DensityMatrix noisy_w_state(int n_qubits, double p);

DensityMatrix maximally_mixed(Index dim);

/// G G^dagger / Tr(G G^dagger) with G a seeded complex Gaussian matrix.
DensityMatrix random_density(Index dim, std::uint64_t seed);

/// Dtilde(random_density(dim, seed)).
DensityMatrix random_block_incoherent(const ProjectorSet& p, std::uint64_t seed);

/// Normalizes a non-zero amplitude list.
PureState pure_from_amplitudes(const std::vector<Complex>& amplitudes);

enum class StateKind { pure, wstate, noisy_wstate, maximally_mixed, random, random_block_incoherent };

StateKind parse_state_kind(std::string_view name);
const char* to_string(StateKind kind);

struct StateSpec {
  StateKind kind = StateKind::maximally_mixed;
  int qubits = 0;                    // W kinds
  Index dim = 0;                     // maximally_mixed, random
  double p = 1.0;                    // noisy_wstate
  std::uint64_t seed = 0;            // random kinds
  std::vector<Complex> amplitudes;   // pure
  std::optional<ProjectorSet> reference;  // random_block_incoherent
};

DensityMatrix make_state(const StateSpec& spec);

}  // namespace cohwit
