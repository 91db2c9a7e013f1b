#pragma once

#include "qot/cmatrix.hpp"

namespace qot {

enum class Factor { first, second };

// Structural dense kernels. `kern` is the production set: loops are
// OpenMP-parallel above a size threshold, with a fixed per-element
// accumulation order so results do not depend on the thread count.
// `ref` holds the serial reference versions kept for testing and for
// the kernel benchmark; both sets compute the same recurrences.
namespace kern {

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix partial_trace(const CMatrix& m, std::size_t d1, std::size_t d2, Factor keep);
CMatrix dagger(const CMatrix& m);
CMatrix transpose(const CMatrix& m);
CMatrix conjugate(const CMatrix& m);

// Permutation realizing the linear extension of X (x) Y^T -> Y (x) X^T on
// d^2-by-d^2 matrices: out[(a,b),(c,e)] = in[(e,c),(b,a)].
CMatrix swap_transpose_matrix(const CMatrix& m, std::size_t d);

}  // namespace kern

namespace ref {

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix partial_trace(const CMatrix& m, std::size_t d1, std::size_t d2, Factor keep);

}  // namespace ref

}  // namespace qot
