#pragma once

#include <cstdint>
#include <vector>

#include "qot/linalg.hpp"

namespace qot {

struct ValidationTol {
  double herm = 1e-10;   // relative Frobenius Hermitian deviation
  double psd = 1e-10;    // allowed eigenvalue undershoot (absolute)
  double trace = 1e-10;  // |tr - 1|
};

// Positive semidefinite, unit-trace matrix with cached spectral data and a
// numerical support projector. Channels paired with a state act on its
// support: the identification of C^r with supp(rho) is the identity when the
// state is full rank and the descending-eigenvector isometry otherwise, so
// every operation sharing a state uses the same basis.
class DensityMatrix {
 public:
  static DensityMatrix validated(const CMatrix& m, const ValidationTol& tol = {});

  std::size_t dim() const { return dim_; }
  const CMatrix& mat() const { return mat_; }
  const SpectralDecomposition& spectrum() const { return spectrum_; }
  std::size_t support_rank() const { return support_rank_; }
  const CMatrix& support_projector() const { return support_projector_; }

  // d-by-r isometry V identifying C^r with supp(rho); I when full rank.
  CMatrix support_isometry() const;

  // sqrt(rho) as a d-by-d matrix, from the cached (clipped) spectrum.
  CMatrix sqrt_full() const;

  // sqrt(rho) viewed as a map H -> supp(rho): V^dagger sqrt(rho), r-by-d.
  // Equals sqrt_full() when the state is full rank.
  CMatrix sqrt_restricted() const;

  // Pseudo-inverse square root on the support, d-by-d.
  CMatrix pinv_sqrt_full() const;

  // rho in support coordinates: diag of the positive eigenvalues (r-by-r).
  CMatrix restricted() const;

 private:
  std::size_t dim_ = 0;
  CMatrix mat_;
  SpectralDecomposition spectrum_;  // eigenvalues clipped at zero
  std::size_t support_rank_ = 0;
  CMatrix support_projector_;
};

DensityMatrix validate_state(const CMatrix& m, const ValidationTol& tol = {});

// G*G^dagger / tr(G*G^dagger) with G a d-by-rank matrix of independent
// standard complex Gaussians drawn from Rng(seed). Deterministic in seed.
DensityMatrix random_state(std::size_t d, std::size_t rank, std::uint64_t seed);

// Finite list of Hermitian matrices of a common dimension (inputs are
// symmetrized after the Hermitian check).
class ObservableSet {
 public:
  static ObservableSet validated(std::vector<CMatrix> observables,
                                 const ValidationTol& tol = {});

  std::size_t dim() const { return dim_; }
  std::size_t count() const { return observables_.size(); }
  const std::vector<CMatrix>& observables() const { return observables_; }
  const CMatrix& operator[](std::size_t k) const { return observables_[k]; }

 private:
  std::size_t dim_ = 0;
  std::vector<CMatrix> observables_;
};

ObservableSet random_observables(std::size_t d, std::size_t count, std::uint64_t seed);

}  // namespace qot
