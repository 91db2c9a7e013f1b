#include "qot/coupling.hpp"

#include <cmath>
#include <iostream>
#include <utility>

#include "qot/kernels.hpp"

namespace qot {

namespace {

CMatrix vec_of(const CMatrix& m) {
  CMatrix v(m.rows() * m.cols(), 1);
  for (std::size_t i = 0; i < m.size(); ++i) v.data()[i] = m.entries()[i];
  return v;
}

}  // namespace

Coupling Coupling::make_unchecked(CMatrix mat, std::size_t d, const ValidationTol& tol) {
  Coupling pi;
  pi.d_ = d;
  pi.mat_ = std::move(mat);
  pi.first_marginal_ =
      DensityMatrix::validated(kern::partial_trace(pi.mat_, d, d, Factor::first), tol);
  pi.second_marginal_T_ = kern::partial_trace(pi.mat_, d, d, Factor::second);
  // The second marginal is rho^T for a state rho; run it through state
  // validation via the transpose so its invariants are enforced too.
  DensityMatrix::validated(kern::transpose(pi.second_marginal_T_), tol);
  return pi;
}

Coupling Coupling::validated(const CMatrix& mat, std::size_t d, const ValidationTol& tol) {
  require_square(mat, "Coupling");
  if (mat.rows() != d * d) fail(errc::dimension_mismatch, "Coupling: side is not d^2");
  if (!mat.is_finite()) fail(errc::parameter, "Coupling: non-finite entries");

  SpectralDecomposition sd = herm_eig(mat);  // also enforces Hermitian
  double tr = 0.0;
  for (double l : sd.eigenvalues) {
    if (l < -tol.psd) fail(errc::not_psd, "Coupling: negative eigenvalue");
    tr += l;
  }
  if (std::abs(tr - 1.0) > tol.trace) fail(errc::not_normalized, "Coupling: trace != 1");
  return make_unchecked(mat, d, tol);
}

Coupling Coupling::from_psd_construction(CMatrix mat, std::size_t d, const ValidationTol& tol) {
  return make_unchecked(std::move(mat), d, tol);
}

Coupling channel_to_coupling(const KrausChannel& phi, const DensityMatrix& rho) {
  if (phi.din() != rho.support_rank())
    fail(errc::domain, "channel_to_coupling: channel not defined on supp(rho)");
  if (phi.dout() != rho.dim())
    fail(errc::domain, "channel_to_coupling: channel output dimension differs from dim(rho)");

  const std::size_t d = rho.dim();
  const CMatrix s = rho.sqrt_restricted();  // r-by-d
  CMatrix pi_mat(d * d, d * d);
  for (const CMatrix& k : phi.kraus()) {
    const CMatrix col = vec_of(kern::matmul(k, s));
    for (std::size_t i = 0; i < col.rows(); ++i) {
      const cx vi = col.entries()[i];
      if (vi == cx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < col.rows(); ++j)
        pi_mat(i, j) += vi * std::conj(col.entries()[j]);
    }
  }
  return Coupling::from_psd_construction(std::move(pi_mat), d);
}

std::pair<DensityMatrix, CMatrix> marginals(const Coupling& pi) {
  return {pi.first_marginal(), pi.second_marginal_T()};
}

Coupling swap_transpose(const Coupling& pi) {
  CMatrix swapped = kern::swap_transpose_matrix(pi.mat(), pi.d());
  // Transposition is positive on this class, so the swap of a valid
  // coupling is again PSD.
  return Coupling::from_psd_construction(std::move(swapped), pi.d());
}

KrausChannel coupling_to_channel(const Coupling& pi, const DensityMatrix& rho) {
  const std::size_t d = pi.d();
  if (rho.dim() != d) fail(errc::dimension_mismatch, "coupling_to_channel: dimensions differ");

  CMatrix second_diff = pi.second_marginal_T() - kern::transpose(rho.mat());
  if (trace_norm(second_diff) > 1e-8)
    fail(errc::not_a_coupling, "coupling_to_channel: second marginal is not rho^T");

  const std::size_t r = rho.support_rank();

  if (r < d) {
    // Weight outside supp(rho^T) on the dual factor is dropped by the
    // conjugation below; surface it when it is numerically meaningful.
    const CMatrix p_t = kern::transpose(rho.support_projector());
    const CMatrix ip = kern::kron(CMatrix::identity(d), p_t);
    const CMatrix inside = kern::matmul(kern::matmul(ip, pi.mat()), ip);
    const double discarded = trace_norm(pi.mat() - inside);
    if (discarded > 1e-8)
      std::clog << "coupling_to_channel: discarding trace-norm weight " << discarded
                << " outside supp(rho) on the dual factor\n";
  }

  // T is the pseudo-inverse of S^T for S = sqrt_restricted(rho): it undoes
  // the sqrt(rho^T) dressing of the dual factor and restricts it to
  // supp(rho^T), taking the coupling to the channel's Choi matrix.
  CMatrix t;
  if (r == d) {
    t = kern::conjugate(rho.pinv_sqrt_full());
  } else {
    t = CMatrix(r, d);
    for (std::size_t k = 0; k < r; ++k) {
      const double w = 1.0 / std::sqrt(rho.spectrum().eigenvalues[k]);
      for (std::size_t j = 0; j < d; ++j) t(k, j) = w * rho.spectrum().eigenvectors(j, k);
    }
  }
  const CMatrix it = kern::kron(CMatrix::identity(d), t);
  const CMatrix choi_r = kern::matmul(kern::matmul(it, pi.mat()), kern::dagger(it));

  CMatrix marginal = kern::partial_trace(choi_r, d, r, Factor::second);
  marginal -= CMatrix::identity(r);
  if (frobenius_norm(marginal) > 1e-7)
    fail(errc::reconstruction,
         "coupling_to_channel: reconstructed Choi matrix is not trace preserving; "
         "the coupling is outside the image of the correspondence for this rho");

  return choi_to_kraus(choi_r, r, d, 1e-7);
}

}  // namespace qot
