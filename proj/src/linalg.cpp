#include "qot/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qot {

namespace {

using EigenCMat =
    Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EigenMap = Eigen::Map<const EigenCMat>;

double herm_deviation(const CMatrix& h) {
  double dev = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = i; j < h.cols(); ++j)
      dev += std::norm(h(i, j) - std::conj(h(j, i))) * (i == j ? 1.0 : 2.0);
  return std::sqrt(dev);
}

CMatrix symmetrize(const CMatrix& h) {
  CMatrix s(h.rows(), h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j)
      s(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
  return s;
}

}  // namespace

SpectralDecomposition herm_eig(const CMatrix& h) {
  require_square(h, "herm_eig");
  const double scale = frobenius_norm(h);
  if (herm_deviation(h) > kHermTol * scale)
    fail(errc::not_hermitian, "herm_eig: Hermitian deviation above tolerance");
  const CMatrix s = symmetrize(h);
  const std::size_t n = s.rows();

  Eigen::SelfAdjointEigenSolver<EigenCMat> solver(EigenMap(s.data(), n, n));
  if (solver.info() != Eigen::Success)
    fail(errc::numeric, "herm_eig: eigensolver did not converge (info=" +
                            std::to_string(static_cast<int>(solver.info())) + ")");

  // Solver output is ascending; reorder descending with a stable tie rule.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return solver.eigenvalues()(a) > solver.eigenvalues()(b);
  });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.eigenvalues[c] = solver.eigenvalues()(order[c]);
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) = solver.eigenvectors()(r, order[c]);
  }
  return out;
}

CMatrix psd_sqrt(const CMatrix& p) {
  SpectralDecomposition sd = herm_eig(p);
  const std::size_t n = p.rows();
  const double lmax = sd.eigenvalues.empty() ? 0.0 : sd.eigenvalues.front();
  const double eps_psd = 1e-10 * std::max(1.0, lmax);
  for (double& l : sd.eigenvalues) {
    if (l < -eps_psd) fail(errc::not_psd, "psd_sqrt: negative eigenvalue beyond tolerance");
    l = l > 0.0 ? std::sqrt(l) : 0.0;
  }
  const CMatrix& v = sd.eigenvectors;
  CMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += sd.eigenvalues[k] * v(i, k) * std::conj(v(j, k));
      out(i, j) = s;
    }
  return out;
}

CMatrix pinv_sqrt(const CMatrix& p, double rank_tol) {
  SpectralDecomposition sd = herm_eig(p);
  const std::size_t n = p.rows();
  const double lmax = sd.eigenvalues.empty() ? 0.0 : sd.eigenvalues.front();
  const double eps_psd = 1e-10 * std::max(1.0, lmax);
  if (!sd.eigenvalues.empty() && sd.eigenvalues.back() < -eps_psd)
    fail(errc::not_psd, "pinv_sqrt: negative eigenvalue beyond tolerance");
  if (lmax <= 0.0) return CMatrix(n, n);  // empty support
  const double cut = rank_tol * lmax;
  for (double& l : sd.eigenvalues) l = l > cut ? 1.0 / std::sqrt(l) : 0.0;
  const CMatrix& v = sd.eigenvectors;
  CMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += sd.eigenvalues[k] * v(i, k) * std::conj(v(j, k));
      out(i, j) = s;
    }
  return out;
}

CMatrix pinv_sqrt(const CMatrix& p) { return pinv_sqrt(p, default_rank_tol(p.rows())); }

double trace_norm(const CMatrix& m) {
  require_square(m, "trace_norm");
  const std::size_t n = m.rows();
  if (n == 0) return 0.0;
  EigenMap em(m.data(), n, n);
  if (n <= 128) {
    Eigen::JacobiSVD<EigenCMat> svd(em);
    return svd.singularValues().sum();
  }
  Eigen::BDCSVD<EigenCMat> svd(em);
  return svd.singularValues().sum();
}

cx hs_inner(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "hs_inner");
  cx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a.entries()[i]) * b.entries()[i];
  return s;
}

}  // namespace qot
