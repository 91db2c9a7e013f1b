#include "qot/channels.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "qot/kernels.hpp"
#include "qot/rng.hpp"

namespace qot {

namespace {

using EigenCMat = Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

CMatrix vec(const CMatrix& m) {
  // Row-major flattening: vec(X)[i*cols + j] = X(i, j). With the kron
  // convention used throughout, (A (x) B^T) vec(X) = vec(A X B).
  CMatrix v(m.rows() * m.cols(), 1);
  for (std::size_t i = 0; i < m.size(); ++i) v.data()[i] = m.entries()[i];
  return v;
}

CMatrix unvec(const CMatrix& v, std::size_t rows, std::size_t cols) {
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) m.data()[i] = v.entries()[i];
  return m;
}

void accumulate_outer(CMatrix& acc, const CMatrix& col) {
  const std::size_t n = col.rows();
  for (std::size_t i = 0; i < n; ++i) {
    const cx vi = col.entries()[i];
    if (vi == cx(0.0, 0.0)) continue;
    for (std::size_t j = 0; j < n; ++j) acc(i, j) += vi * std::conj(col.entries()[j]);
  }
}

}  // namespace

KrausChannel KrausChannel::validated(std::vector<CMatrix> kraus, std::size_t din,
                                     std::size_t dout, double tp_tol) {
  if (kraus.empty()) fail(errc::parameter, "validate_channel: empty Kraus list");
  if (din < 1 || dout < 1) fail(errc::parameter, "validate_channel: dimensions must be positive");
  for (const CMatrix& k : kraus) {
    if (k.rows() != dout || k.cols() != din)
      fail(errc::dimension_mismatch, "validate_channel: Kraus operator is not dout-by-din");
    if (!k.is_finite()) fail(errc::parameter, "validate_channel: non-finite entries");
  }
  CMatrix sum(din, din);
  for (const CMatrix& k : kraus) sum += kern::matmul(kern::dagger(k), k);
  sum -= CMatrix::identity(din);
  const double residual = frobenius_norm(sum);
  if (residual > tp_tol)
    fail(errc::not_trace_preserving, "validate_channel: sum K^dagger K deviates from identity");

  KrausChannel phi;
  phi.din_ = din;
  phi.dout_ = dout;
  phi.kraus_ = std::move(kraus);
  phi.tp_residual_ = residual;
  return phi;
}

KrausChannel validate_channel(std::vector<CMatrix> kraus, std::size_t din, std::size_t dout) {
  return KrausChannel::validated(std::move(kraus), din, dout);
}

CMatrix apply_channel(const KrausChannel& phi, const CMatrix& x) {
  if (x.rows() != phi.din() || x.cols() != phi.din())
    fail(errc::dimension_mismatch, "apply_channel: input is not din-by-din");
  CMatrix out(phi.dout(), phi.dout());
  for (const CMatrix& k : phi.kraus())
    out += kern::matmul(kern::matmul(k, x), kern::dagger(k));
  return out;
}

CMatrix adjoint_apply(const KrausChannel& phi, const CMatrix& a) {
  if (a.rows() != phi.dout() || a.cols() != phi.dout())
    fail(errc::dimension_mismatch, "adjoint_apply: input is not dout-by-dout");
  CMatrix out(phi.din(), phi.din());
  for (const CMatrix& k : phi.kraus())
    out += kern::matmul(kern::matmul(kern::dagger(k), a), k);
  return out;
}

KrausChannel random_channel(std::size_t din, std::size_t dout, std::size_t kraus_rank,
                            std::uint64_t seed) {
  if (kraus_rank < 1 || kraus_rank > din * dout)
    fail(errc::parameter, "random_channel: kraus_rank out of range");
  if (dout * kraus_rank < din)
    fail(errc::parameter,
         "random_channel: no trace-preserving channel with dout*kraus_rank < din");
  Rng rng(seed);
  const CMatrix g = gaussian_matrix(dout * kraus_rank, din, rng);

  Eigen::Map<const EigenCMat> gm(g.data(), g.rows(), g.cols());
  Eigen::HouseholderQR<EigenCMat> qr(gm);
  EigenCMat thin_q = qr.householderQ() * EigenCMat::Identity(g.rows(), din);

  std::vector<CMatrix> kraus(kraus_rank, CMatrix(dout, din));
  for (std::size_t m = 0; m < kraus_rank; ++m)
    for (std::size_t r = 0; r < dout; ++r)
      for (std::size_t c = 0; c < din; ++c) kraus[m](r, c) = thin_q(m * dout + r, c);
  return KrausChannel::validated(std::move(kraus), din, dout, 1e-12);
}

CMatrix canonical_purification(const DensityMatrix& rho) { return vec(rho.sqrt_full()); }

CMatrix choi(const KrausChannel& phi) {
  const std::size_t n = phi.dout() * phi.din();
  CMatrix j(n, n);
  for (const CMatrix& k : phi.kraus()) accumulate_outer(j, vec(k));
  return j;
}

KrausChannel choi_to_kraus(const CMatrix& j, std::size_t din, std::size_t dout,
                           double marginal_tol) {
  require_square(j, "choi_to_kraus");
  if (j.rows() != din * dout)
    fail(errc::dimension_mismatch, "choi_to_kraus: side is not dout*din");

  SpectralDecomposition sd = herm_eig(j);
  const double lmax = sd.eigenvalues.empty() ? 0.0 : sd.eigenvalues.front();
  const double eps_psd = 1e-10 * std::max(1.0, lmax);
  if (!sd.eigenvalues.empty() && sd.eigenvalues.back() < -eps_psd)
    fail(errc::not_psd, "choi_to_kraus: matrix not PSD");

  CMatrix marginal = kern::partial_trace(j, dout, din, Factor::second);
  marginal -= CMatrix::identity(din);
  if (frobenius_norm(marginal) > marginal_tol)
    fail(errc::not_a_channel, "choi_to_kraus: input-side marginal deviates from identity");

  const double cut = default_rank_tol(j.rows()) * lmax;
  std::vector<CMatrix> kraus;
  for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
    if (sd.eigenvalues[k] <= cut) continue;
    const double w = std::sqrt(sd.eigenvalues[k]);
    CMatrix col(j.rows(), 1);
    for (std::size_t r = 0; r < j.rows(); ++r) col(r, 0) = w * sd.eigenvectors(r, k);
    kraus.push_back(unvec(col, dout, din));
  }
  if (kraus.empty()) fail(errc::not_a_channel, "choi_to_kraus: zero Choi matrix");
  return KrausChannel::validated(std::move(kraus), din, dout, 10.0 * marginal_tol);
}

KrausChannel identity_channel(std::size_t d) {
  return KrausChannel::validated({CMatrix::identity(d)}, d, d, 1e-12);
}

KrausChannel unitary_channel(const CMatrix& u) {
  require_square(u, "unitary_channel");
  return KrausChannel::validated({u}, u.rows(), u.rows(), 1e-9);
}

KrausChannel replacer_channel(const DensityMatrix& omega, std::size_t din) {
  // Kraus set {sqrt(mu_j) |g_j><i|}: sends any din-dimensional state to omega.
  const std::size_t d = omega.dim();
  std::vector<CMatrix> kraus;
  kraus.reserve(omega.support_rank() * din);
  for (std::size_t jdx = 0; jdx < omega.support_rank(); ++jdx) {
    const double w = std::sqrt(omega.spectrum().eigenvalues[jdx]);
    for (std::size_t i = 0; i < din; ++i) {
      CMatrix k(d, din);
      for (std::size_t r = 0; r < d; ++r) k(r, i) = w * omega.spectrum().eigenvectors(r, jdx);
      kraus.push_back(std::move(k));
    }
  }
  return KrausChannel::validated(std::move(kraus), din, d, 1e-9);
}

KrausChannel identity_on_support(const DensityMatrix& rho) {
  return KrausChannel::validated({rho.support_isometry()}, rho.support_rank(), rho.dim(), 1e-9);
}

}  // namespace qot
