#include "qot/states.hpp"

#include <cmath>

#include "qot/kernels.hpp"
#include "qot/rng.hpp"

namespace qot {

namespace {

CMatrix scaled_eigvec_product(const SpectralDecomposition& sd, const std::vector<double>& w) {
  // sum_k w_k v_k v_k^dagger
  const std::size_t n = sd.eigenvectors.rows();
  CMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cx s = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k] != 0.0) s += w[k] * sd.eigenvectors(i, k) * std::conj(sd.eigenvectors(j, k));
      out(i, j) = s;
    }
  return out;
}

}  // namespace

DensityMatrix DensityMatrix::validated(const CMatrix& m, const ValidationTol& tol) {
  require_square(m, "validate_state");
  if (!m.is_finite()) fail(errc::parameter, "validate_state: non-finite entries");

  DensityMatrix rho;
  rho.dim_ = m.rows();

  // herm_eig rejects beyond the relative Hermitian tolerance and symmetrizes.
  double dev = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      dev += std::norm(m(i, j) - std::conj(m(j, i))) * (i == j ? 1.0 : 2.0);
  if (std::sqrt(dev) > tol.herm * std::max(1.0, frobenius_norm(m)))
    fail(errc::not_hermitian, "validate_state: matrix not Hermitian");

  rho.spectrum_ = herm_eig(m);

  double tr = 0.0;
  for (double l : rho.spectrum_.eigenvalues) {
    if (l < -tol.psd) fail(errc::not_psd, "validate_state: negative eigenvalue");
    tr += l;
  }
  if (std::abs(tr - 1.0) > tol.trace) fail(errc::not_normalized, "validate_state: trace != 1");

  for (double& l : rho.spectrum_.eigenvalues) l = std::max(l, 0.0);

  // Store the symmetrized matrix so downstream products see an exactly
  // Hermitian operator.
  rho.mat_ = CMatrix(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      rho.mat_(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

  const double lmax = rho.spectrum_.eigenvalues.empty() ? 0.0 : rho.spectrum_.eigenvalues[0];
  const double cut = default_rank_tol(rho.dim_) * lmax;
  rho.support_rank_ = 0;
  for (double l : rho.spectrum_.eigenvalues)
    if (l > cut) ++rho.support_rank_;

  if (rho.support_rank_ == rho.dim_) {
    rho.support_projector_ = CMatrix::identity(rho.dim_);
  } else {
    std::vector<double> w(rho.support_rank_, 1.0);
    rho.support_projector_ = scaled_eigvec_product(rho.spectrum_, w);
  }
  return rho;
}

DensityMatrix validate_state(const CMatrix& m, const ValidationTol& tol) {
  return DensityMatrix::validated(m, tol);
}

CMatrix DensityMatrix::support_isometry() const {
  if (support_rank_ == dim_) return CMatrix::identity(dim_);
  CMatrix v(dim_, support_rank_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < support_rank_; ++k) v(i, k) = spectrum_.eigenvectors(i, k);
  return v;
}

CMatrix DensityMatrix::sqrt_full() const {
  std::vector<double> w(spectrum_.eigenvalues.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::sqrt(spectrum_.eigenvalues[k]);
  return scaled_eigvec_product(spectrum_, w);
}

CMatrix DensityMatrix::sqrt_restricted() const {
  if (support_rank_ == dim_) return sqrt_full();
  CMatrix s(support_rank_, dim_);
  for (std::size_t k = 0; k < support_rank_; ++k) {
    const double root = std::sqrt(spectrum_.eigenvalues[k]);
    for (std::size_t j = 0; j < dim_; ++j) s(k, j) = root * std::conj(spectrum_.eigenvectors(j, k));
  }
  return s;
}

CMatrix DensityMatrix::pinv_sqrt_full() const {
  std::vector<double> w(support_rank_);
  for (std::size_t k = 0; k < support_rank_; ++k) w[k] = 1.0 / std::sqrt(spectrum_.eigenvalues[k]);
  return scaled_eigvec_product(spectrum_, w);
}

CMatrix DensityMatrix::restricted() const {
  if (support_rank_ == dim_) return mat_;
  CMatrix r(support_rank_, support_rank_);
  for (std::size_t k = 0; k < support_rank_; ++k) r(k, k) = spectrum_.eigenvalues[k];
  return r;
}

DensityMatrix random_state(std::size_t d, std::size_t rank, std::uint64_t seed) {
  if (rank < 1 || rank > d) fail(errc::parameter, "random_state: rank out of range");
  Rng rng(seed);
  const CMatrix g = gaussian_matrix(d, rank, rng);
  CMatrix m = kern::matmul(g, kern::dagger(g));
  const double tr = trace(m).real();
  m *= cx(1.0 / tr, 0.0);
  return DensityMatrix::validated(m);
}

ObservableSet ObservableSet::validated(std::vector<CMatrix> observables,
                                       const ValidationTol& tol) {
  if (observables.empty()) fail(errc::parameter, "ObservableSet: empty list");
  ObservableSet set;
  set.dim_ = observables.front().rows();
  for (CMatrix& a : observables) {
    require_square(a, "ObservableSet");
    if (a.rows() != set.dim_) fail(errc::dimension_mismatch, "ObservableSet: mixed dimensions");
    if (!a.is_finite()) fail(errc::parameter, "ObservableSet: non-finite entries");
    double dev = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = i; j < a.cols(); ++j)
        dev += std::norm(a(i, j) - std::conj(a(j, i))) * (i == j ? 1.0 : 2.0);
    if (std::sqrt(dev) > tol.herm * std::max(1.0, frobenius_norm(a)))
      fail(errc::not_hermitian, "ObservableSet: observable not Hermitian");
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = i; j < a.cols(); ++j) {
        const cx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
        a(i, j) = v;
        a(j, i) = std::conj(v);
      }
  }
  set.observables_ = std::move(observables);
  return set;
}

ObservableSet random_observables(std::size_t d, std::size_t count, std::uint64_t seed) {
  if (count < 1) fail(errc::parameter, "random_observables: count < 1");
  Rng rng(seed);
  std::vector<CMatrix> obs;
  obs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const CMatrix g = gaussian_matrix(d, d, rng);
    CMatrix a(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) a(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
    obs.push_back(std::move(a));
  }
  return ObservableSet::validated(std::move(obs));
}

}  // namespace qot
