#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "qot/errors.hpp"

namespace qot {

using cx = std::complex<double>;

// Hard cap on any matrix side produced by tensor operations
// (64-dimensional single systems, 64*64 couplings of couplings).
inline constexpr std::size_t kMaxDim = 4096;

// Dense complex matrix, row-major storage. The universal carrier for
// operators, states, couplings and vectors-as-columns.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cx(0.0, 0.0)) {}
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cx> entries);
  CMatrix(std::initializer_list<std::initializer_list<cx>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix diag(const std::vector<cx>& d);
  static CMatrix diag_real(const std::vector<double>& d);
  static CMatrix column(const std::vector<cx>& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool is_square() const { return rows_ == cols_; }
  bool is_finite() const;

  cx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  cx* data() { return data_.data(); }
  const cx* data() const { return data_.data(); }
  const std::vector<cx>& entries() const { return data_; }

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cx s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cx s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);  // kern::matmul

cx trace(const CMatrix& m);
double frobenius_norm(const CMatrix& m);
double max_abs(const CMatrix& m);
double max_abs_diff(const CMatrix& a, const CMatrix& b);

// tr(a * b) without forming the product.
cx trace_of_product(const CMatrix& a, const CMatrix& b);

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* who);
void require_square(const CMatrix& m, const char* who);

}  // namespace qot
