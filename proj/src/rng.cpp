#include "qot/rng.hpp"

#include <cmath>
#include <numbers>

namespace qot {

cx Rng::next_complex_gaussian() {
  // Box-Muller; u1 is shifted into (0,1] so the log is finite.
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  return cx(r * std::cos(t), r * std::sin(t));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  Rng mix(base ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL));
  return mix.next_u64();
}

CMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) g.data()[i] = rng.next_complex_gaussian();
  return g;
}

}  // namespace qot
