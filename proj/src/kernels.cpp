#include "qot/kernels.hpp"

namespace qot {

namespace {

void check_matmul_dims(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) fail(errc::dimension_mismatch, "matmul: inner dimensions differ");
}

void check_kron_dims(const CMatrix& a, const CMatrix& b) {
  if (a.rows() * b.rows() > kMaxDim || a.cols() * b.cols() > kMaxDim)
    fail(errc::dimension_limit, "kron: result side exceeds the configured maximum dimension");
}

void check_ptrace_dims(const CMatrix& m, std::size_t d1, std::size_t d2) {
  require_square(m, "partial_trace");
  if (d1 * d2 != m.rows())
    fail(errc::dimension_mismatch, "partial_trace: factor dimensions do not multiply to side");
}

}  // namespace

namespace kern {

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  check_matmul_dims(a, b);
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  CMatrix c(m, n);
  // Each output row is owned by one iteration; the k-accumulation order is
  // fixed, so the result is identical for any thread count.
  const bool par = m * k * n >= 32768;
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
    cx* crow = c.data() + i * n;
    const cx* arow = a.data() + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const cx aip = arow[p];
      if (aip == cx(0.0, 0.0)) continue;
      const cx* brow = b.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  return c;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  check_kron_dims(a, b);
  const std::size_t ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  CMatrix c(ar * br, ac * bc);
  const bool par = c.size() >= 65536;
#pragma omp parallel for schedule(static) collapse(2) if (par)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ar); ++i)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(br); ++p)
      for (std::size_t j = 0; j < ac; ++j) {
        const cx aij = a(i, j);
        for (std::size_t q = 0; q < bc; ++q) c(i * br + p, j * bc + q) = aij * b(p, q);
      }
  return c;
}

CMatrix partial_trace(const CMatrix& m, std::size_t d1, std::size_t d2, Factor keep) {
  check_ptrace_dims(m, d1, d2);
  if (keep == Factor::first) {
    CMatrix out(d1, d1);
    const bool par = d1 * d1 * d2 >= 32768;
#pragma omp parallel for schedule(static) collapse(2) if (par)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(d1); ++i)
      for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(d1); ++k) {
        cx s = 0.0;
        for (std::size_t j = 0; j < d2; ++j) s += m(i * d2 + j, k * d2 + j);
        out(i, k) = s;
      }
    return out;
  }
  CMatrix out(d2, d2);
  const bool par = d2 * d2 * d1 >= 32768;
#pragma omp parallel for schedule(static) collapse(2) if (par)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(d2); ++j)
    for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(d2); ++l) {
      cx s = 0.0;
      for (std::size_t i = 0; i < d1; ++i) s += m(i * d2 + j, i * d2 + l);
      out(j, l) = s;
    }
  return out;
}

CMatrix dagger(const CMatrix& m) {
  CMatrix out(m.cols(), m.rows());
  const bool par = m.size() >= 65536;
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m.rows()); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

CMatrix transpose(const CMatrix& m) {
  CMatrix out(m.cols(), m.rows());
  const bool par = m.size() >= 65536;
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m.rows()); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

CMatrix conjugate(const CMatrix& m) {
  CMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) out.data()[i] = std::conj(m.entries()[i]);
  return out;
}

CMatrix swap_transpose_matrix(const CMatrix& m, std::size_t d) {
  require_square(m, "swap_transpose");
  if (m.rows() != d * d) fail(errc::dimension_mismatch, "swap_transpose: side is not d^2");
  CMatrix out(d * d, d * d);
  const bool par = m.size() >= 65536;
#pragma omp parallel for schedule(static) collapse(2) if (par)
  for (std::ptrdiff_t a = 0; a < static_cast<std::ptrdiff_t>(d); ++a)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(d); ++b)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t e = 0; e < d; ++e)
          out(a * d + b, c * d + e) = m(e * d + c, b * d + a);
  return out;
}

}  // namespace kern

namespace ref {

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  check_matmul_dims(a, b);
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  CMatrix c(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cx s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a(i, p) * b(p, j);
      c(i, j) = s;
    }
  return c;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  check_kron_dims(a, b);
  CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          c(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return c;
}

CMatrix partial_trace(const CMatrix& m, std::size_t d1, std::size_t d2, Factor keep) {
  check_ptrace_dims(m, d1, d2);
  if (keep == Factor::first) {
    CMatrix out(d1, d1);
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t k = 0; k < d1; ++k) {
        cx s = 0.0;
        for (std::size_t j = 0; j < d2; ++j) s += m(i * d2 + j, k * d2 + j);
        out(i, k) = s;
      }
    return out;
  }
  CMatrix out(d2, d2);
  for (std::size_t j = 0; j < d2; ++j)
    for (std::size_t l = 0; l < d2; ++l) {
      cx s = 0.0;
      for (std::size_t i = 0; i < d1; ++i) s += m(i * d2 + j, i * d2 + l);
      out(j, l) = s;
    }
  return out;
}

}  // namespace ref

}  // namespace qot
