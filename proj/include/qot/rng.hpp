#pragma once

#include <cstdint>

#include "qot/cmatrix.hpp"

namespace qot {

// SplitMix64 (Steele, Lea, Flood 2014): a 64-bit counter-based generator.
// Gaussians come from Box-Muller on top of it. Both are hand-rolled so that
// every stochastic output is bit-reproducible for a given seed, independent
// of the standard library in use. All stochastic operations take an explicit
// seed; generator state is caller-owned and never shared.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard complex Gaussian: independent N(0,1) real and imaginary parts.
  cx next_complex_gaussian();

 private:
  std::uint64_t state_;
};

// Stream derivation for independent substreams (restarts, trials, fields).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

CMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace qot
