#pragma once

#include <cstdint>
#include <vector>

#include "qot/states.hpp"

namespace qot {

// Completely positive trace-preserving map in Kraus form. Complete
// positivity is automatic; validation checks sum K^dagger K = I_din.
// When a channel is paired with a state, its din-dimensional input space is
// supp(rho) in the state's support coordinates (see DensityMatrix).
class KrausChannel {
 public:
  static KrausChannel validated(std::vector<CMatrix> kraus, std::size_t din, std::size_t dout,
                                double tp_tol = 1e-9);

  std::size_t din() const { return din_; }
  std::size_t dout() const { return dout_; }
  const std::vector<CMatrix>& kraus() const { return kraus_; }
  std::size_t kraus_rank() const { return kraus_.size(); }

  // Frobenius residual of sum K^dagger K - I recorded at validation.
  double tp_residual() const { return tp_residual_; }

 private:
  std::size_t din_ = 0;
  std::size_t dout_ = 0;
  std::vector<CMatrix> kraus_;
  double tp_residual_ = 0.0;
};

KrausChannel validate_channel(std::vector<CMatrix> kraus, std::size_t din, std::size_t dout);

// sum_m K_m x K_m^dagger for a din-by-din input.
CMatrix apply_channel(const KrausChannel& phi, const CMatrix& x);

// sum_m K_m^dagger a K_m for a dout-by-dout input (Heisenberg picture).
CMatrix adjoint_apply(const KrausChannel& phi, const CMatrix& a);

// Kraus operators from the thin-Q factor of a Householder QR of a
// (dout*kraus_rank)-by-din complex Gaussian matrix; deterministic in seed.
KrausChannel random_channel(std::size_t din, std::size_t dout, std::size_t kraus_rank,
                            std::uint64_t seed);

// Vectorization of sqrt(rho) in H (x) H^*, returned as a d^2-by-1 column.
// The rank-one operator it spans has marginals rho and rho^T.
CMatrix canonical_purification(const DensityMatrix& rho);

// sum_m vec(K_m) vec(K_m)^dagger: PSD (dout*din)-square with trace din.
CMatrix choi(const KrausChannel& phi);

// Kraus list from the eigendecomposition of a Choi matrix (one operator per
// eigenvalue above rank_tol * lambda_max). marginal_tol bounds the allowed
// deviation of the input-side marginal from I_din.
KrausChannel choi_to_kraus(const CMatrix& j, std::size_t din, std::size_t dout,
                           double marginal_tol = 1e-8);

KrausChannel identity_channel(std::size_t d);
KrausChannel unitary_channel(const CMatrix& u);

// X -> tr(X) * omega from a din-dimensional input space.
KrausChannel replacer_channel(const DensityMatrix& omega, std::size_t din);

// Identity on supp(rho): single Kraus operator V (the support isometry).
KrausChannel identity_on_support(const DensityMatrix& rho);

}  // namespace qot
