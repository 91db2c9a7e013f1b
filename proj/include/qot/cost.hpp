#pragma once

#include "qot/coupling.hpp"

namespace qot {

// Quadratic cost operator sum_k (A_k (x) I - I (x) A_k^T)^2. Hermitian PSD,
// invariant under the swap transpose, and annihilates vec(I).
class CostOperator {
 public:
  CostOperator(std::size_t d, CMatrix mat) : d_(d), mat_(std::move(mat)) {}

  std::size_t d() const { return d_; }
  const CMatrix& mat() const { return mat_; }

 private:
  std::size_t d_ = 0;
  CMatrix mat_;
};

CostOperator cost_operator(const ObservableSet& obs);

struct CostReport {
  double coupling_cost = 0.0;
  double channel_cost = 0.0;
  std::vector<double> per_observable;  // coupling-route terms; sums to coupling_cost
  double consistency_residual = 0.0;   // |channel route - coupling route|
};

// tr(Pi C_A). Computed by Hilbert-Schmidt pairing against the materialized
// cost operator for d <= 8 and by the structural route (no d^2-square matrix)
// for larger d; the two routes cross-validate in the tests.
double coupling_cost(const Coupling& pi, const ObservableSet& obs);

// Per-observable terms of tr(Pi C_A), in observable order.
std::vector<double> coupling_cost_terms(const Coupling& pi, const ObservableSet& obs);

// Forces one route regardless of dimension (test cross-validation hooks).
double coupling_cost_materialized(const Coupling& pi, const ObservableSet& obs);
double coupling_cost_structural(const Coupling& pi, const ObservableSet& obs);

// Channel-route cost sum_k( tr[Phi(rho) A^2] + tr[rho A^2]
// - 2 tr[sqrt(rho) A sqrt(rho) Phi^dagger(A)] ), together with the
// coupling-route value for the corresponding coupling and their residual.
CostReport channel_cost(const KrausChannel& phi, const DensityMatrix& rho,
                        const ObservableSet& obs);

}  // namespace qot
