#pragma once

#include "qot/channels.hpp"

namespace qot {

// Unit-trace PSD operator on H (x) H^* with both factors of dimension d.
// Index convention: composite row index = (H index, dual index), Kronecker
// order first factor H, second factor H^*. Under this convention the
// "keep first" partial trace is the trace over H^*, the marginals of a
// channel coupling are (Phi(rho), rho^T), and (A (x) B^T) vec(X) = vec(AXB).
class Coupling {
 public:
  // Full validation: Hermitian, PSD (eigendecomposition), unit trace, and
  // both marginals consistent; the first marginal must validate as a state.
  static Coupling validated(const CMatrix& mat, std::size_t d, const ValidationTol& tol = {});

  // Construction path for operators PSD by construction (Gram sums, swaps of
  // valid couplings); marginals are still recomputed and the first marginal
  // is still validated as a state, only the PSD eigendecomposition is skipped.
  static Coupling from_psd_construction(CMatrix mat, std::size_t d,
                                        const ValidationTol& tol = {});

  std::size_t d() const { return d_; }
  const CMatrix& mat() const { return mat_; }
  const DensityMatrix& first_marginal() const { return first_marginal_; }
  const CMatrix& second_marginal_T() const { return second_marginal_T_; }

 private:
  static Coupling make_unchecked(CMatrix mat, std::size_t d, const ValidationTol& tol);

  std::size_t d_ = 0;
  CMatrix mat_;
  DensityMatrix first_marginal_;
  CMatrix second_marginal_T_;
};

// Pi_Phi = (Phi (x) id)(|sqrt(rho)>><<sqrt(rho)|), realized as
// sum_m vec(K_m S) vec(K_m S)^dagger with S = sqrt(rho) as a map into
// supp(rho). Requires phi.din == rho.support_rank and phi.dout == rho.dim.
Coupling channel_to_coupling(const KrausChannel& phi, const DensityMatrix& rho);

// (first marginal, second marginal) = (omega, rho^T), as cached.
std::pair<DensityMatrix, CMatrix> marginals(const Coupling& pi);

// Linear involution extending X (x) Y^T -> Y (x) X^T; maps couplings of
// (rho, omega) onto couplings of (omega, rho) at equal cost.
Coupling swap_transpose(const Coupling& pi);

// Inverse of the correspondence: conjugate by I (x) pinv_sqrt(rho^T),
// restrict the dual factor to supp(rho), and convert the resulting Choi
// matrix to Kraus form. Errors if the second marginal is not rho^T or the
// reconstructed Choi fails the trace-preservation marginal beyond 1e-7.
KrausChannel coupling_to_channel(const Coupling& pi, const DensityMatrix& rho);

}  // namespace qot
