#include "qot/cost.hpp"

#include <cmath>

#include "qot/kernels.hpp"

namespace qot {

namespace {

constexpr double kImagResidueTol = 1e-8;

double real_checked(cx value, const char* who) {
  if (std::abs(value.imag()) > kImagResidueTol)
    fail(errc::numeric, std::string(who) + ": imaginary residue above tolerance");
  return value.real();
}

// tr[Pi (A (x) A^T)] entrywise; per-(i,j) row sums are accumulated into a
// scratch array (parallel) and combined in index order, so the total is
// bit-stable for any thread count.
cx cross_term(const CMatrix& pi, const CMatrix& a, std::size_t d) {
  std::vector<cx> row_sums(d * d, cx(0.0, 0.0));
  const bool par = d >= 12;
#pragma omp parallel for schedule(static) collapse(2) if (par)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(d); ++i)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(d); ++j) {
      cx s = 0.0;
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) s += pi(i * d + j, k * d + l) * a(k, i) * a(j, l);
      row_sums[i * d + j] = s;
    }
  cx total = 0.0;
  for (const cx& s : row_sums) total += s;
  return total;
}

std::vector<double> structural_terms(const Coupling& pi, const ObservableSet& obs) {
  const std::size_t d = pi.d();
  const CMatrix& omega = pi.first_marginal().mat();
  const CMatrix rho = kern::transpose(pi.second_marginal_T());
  std::vector<double> terms;
  terms.reserve(obs.count());
  for (std::size_t k = 0; k < obs.count(); ++k) {
    const CMatrix a2 = kern::matmul(obs[k], obs[k]);
    const cx t = trace_of_product(omega, a2) + trace_of_product(rho, a2) -
                 2.0 * cross_term(pi.mat(), obs[k], d);
    terms.push_back(real_checked(t, "coupling_cost"));
  }
  return terms;
}

std::vector<double> materialized_terms(const Coupling& pi, const ObservableSet& obs) {
  const std::size_t d = pi.d();
  const CMatrix eye = CMatrix::identity(d);
  std::vector<double> terms;
  terms.reserve(obs.count());
  for (std::size_t k = 0; k < obs.count(); ++k) {
    CMatrix b = kern::kron(obs[k], eye) - kern::kron(eye, kern::transpose(obs[k]));
    const CMatrix ck = kern::matmul(b, b);
    terms.push_back(real_checked(trace_of_product(pi.mat(), ck), "coupling_cost"));
  }
  return terms;
}

}  // namespace

CostOperator cost_operator(const ObservableSet& obs) {
  const std::size_t d = obs.dim();
  const CMatrix eye = CMatrix::identity(d);
  CMatrix mat(d * d, d * d);
  for (std::size_t k = 0; k < obs.count(); ++k) {
    CMatrix b = kern::kron(obs[k], eye) - kern::kron(eye, kern::transpose(obs[k]));
    mat += kern::matmul(b, b);
  }
  return CostOperator(d, std::move(mat));
}

std::vector<double> coupling_cost_terms(const Coupling& pi, const ObservableSet& obs) {
  if (obs.dim() != pi.d()) fail(errc::dimension_mismatch, "coupling_cost: dimensions differ");
  return pi.d() <= 8 ? materialized_terms(pi, obs) : structural_terms(pi, obs);
}

double coupling_cost(const Coupling& pi, const ObservableSet& obs) {
  double total = 0.0;
  for (double t : coupling_cost_terms(pi, obs)) total += t;
  return total;
}

double coupling_cost_materialized(const Coupling& pi, const ObservableSet& obs) {
  if (obs.dim() != pi.d()) fail(errc::dimension_mismatch, "coupling_cost: dimensions differ");
  double total = 0.0;
  for (double t : materialized_terms(pi, obs)) total += t;
  return total;
}

double coupling_cost_structural(const Coupling& pi, const ObservableSet& obs) {
  if (obs.dim() != pi.d()) fail(errc::dimension_mismatch, "coupling_cost: dimensions differ");
  double total = 0.0;
  for (double t : structural_terms(pi, obs)) total += t;
  return total;
}

CostReport channel_cost(const KrausChannel& phi, const DensityMatrix& rho,
                        const ObservableSet& obs) {
  if (phi.din() != rho.support_rank())
    fail(errc::domain, "channel_cost: channel not defined on supp(rho)");
  if (phi.dout() != rho.dim() || obs.dim() != rho.dim())
    fail(errc::dimension_mismatch, "channel_cost: dimensions differ");

  const CMatrix omega = apply_channel(phi, rho.restricted());
  const CMatrix s = rho.sqrt_restricted();  // r-by-d

  CostReport report;
  double channel_total = 0.0;
  for (std::size_t k = 0; k < obs.count(); ++k) {
    const CMatrix& a = obs[k];
    const CMatrix a2 = kern::matmul(a, a);
    // tr[sqrt(rho) A sqrt(rho) Phi^dagger(A)] in support coordinates.
    const CMatrix sas = kern::matmul(kern::matmul(s, a), kern::dagger(s));
    const cx t = trace_of_product(omega, a2) + trace_of_product(rho.mat(), a2) -
                 2.0 * trace_of_product(sas, adjoint_apply(phi, a));
    channel_total += real_checked(t, "channel_cost");
  }
  report.channel_cost = channel_total;

  const Coupling pi = channel_to_coupling(phi, rho);
  report.per_observable = coupling_cost_terms(pi, obs);
  report.coupling_cost = 0.0;
  for (double t : report.per_observable) report.coupling_cost += t;
  report.consistency_residual = std::abs(report.channel_cost - report.coupling_cost);
  return report;
}

}  // namespace qot
