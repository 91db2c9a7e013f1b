#pragma once

#include <vector>

#include "qot/cmatrix.hpp"

namespace qot {

// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // descending; ties keep ascending-solver order
  CMatrix eigenvectors;             // orthonormal columns, matching order
};

// Default pseudo-inverse rank cutoff: eigenvalues <= rank_tol * lambda_max
// are treated as zero. Scales with the accumulation error of n-term sums.
inline double default_rank_tol(std::size_t n) { return 1e-12 * static_cast<double>(n); }

// Relative Hermitian deviation allowed before a matrix is rejected; inputs
// within tolerance are symmetrized as (h + h^dagger)/2 before use.
inline constexpr double kHermTol = 1e-10;

SpectralDecomposition herm_eig(const CMatrix& h);

// Square root of a PSD Hermitian matrix. Eigenvalues below
// -1e-10*max(1, lambda_max) are an error; small negatives are clipped.
CMatrix psd_sqrt(const CMatrix& p);

// Inverse square root on the support: sum over lambda_j > rank_tol*lambda_max
// of lambda_j^{-1/2} v_j v_j^dagger. The zero matrix maps to zero.
CMatrix pinv_sqrt(const CMatrix& p, double rank_tol);
CMatrix pinv_sqrt(const CMatrix& p);

// Sum of singular values (SVD route; the Hermitian |eigenvalue| sum is kept
// as an independent cross-check in the tests).
double trace_norm(const CMatrix& m);

// Hilbert-Schmidt inner product tr(a^dagger b).
cx hs_inner(const CMatrix& a, const CMatrix& b);

}  // namespace qot
