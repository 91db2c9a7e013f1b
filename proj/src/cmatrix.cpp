#include "qot/cmatrix.hpp"

#include <cmath>
#include <utility>

#include "qot/kernels.hpp"

namespace qot {

const char* errc_name(errc c) {
  switch (c) {
    case errc::dimension_mismatch: return "dimension-mismatch";
    case errc::dimension_limit: return "dimension-limit";
    case errc::not_hermitian: return "not-hermitian";
    case errc::not_psd: return "not-psd";
    case errc::not_normalized: return "not-normalized";
    case errc::not_trace_preserving: return "not-trace-preserving";
    case errc::not_a_channel: return "not-a-channel";
    case errc::not_a_coupling: return "not-a-coupling";
    case errc::reconstruction: return "reconstruction";
    case errc::numeric: return "numeric";
    case errc::parameter: return "parameter";
    case errc::domain: return "domain";
    case errc::solver_failure: return "solver-failure";
    case errc::degenerate_output: return "degenerate-output";
    case errc::io: return "io";
  }
  return "unknown";
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_)
    fail(errc::parameter, "entry count does not match rows*cols");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(errc::parameter, "ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diag(const std::vector<cx>& d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::diag_real(const std::vector<double>& d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::column(const std::vector<cx>& v) { return CMatrix(v.size(), 1, v); }

bool CMatrix::is_finite() const {
  for (const cx& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_shape(*this, o, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_shape(*this, o, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(cx s) {
  for (cx& z : data_) z *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cx s, CMatrix a) { return a *= s; }
CMatrix operator*(const CMatrix& a, const CMatrix& b) { return kern::matmul(a, b); }

cx trace(const CMatrix& m) {
  require_square(m, "trace");
  cx t = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

double frobenius_norm(const CMatrix& m) {
  double s = 0.0;
  for (const cx& z : m.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double max_abs(const CMatrix& m) {
  double s = 0.0;
  for (const cx& z : m.entries()) s = std::max(s, std::abs(z));
  return s;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s = std::max(s, std::abs(a.entries()[i] - b.entries()[i]));
  return s;
}

cx trace_of_product(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    fail(errc::dimension_mismatch, "trace_of_product shapes");
  cx t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t += a(i, j) * b(j, i);
  return t;
}

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(errc::dimension_mismatch, std::string(who) + ": shapes differ");
}

void require_square(const CMatrix& m, const char* who) {
  if (!m.is_square()) fail(errc::dimension_mismatch, std::string(who) + ": matrix not square");
}

}  // namespace qot
