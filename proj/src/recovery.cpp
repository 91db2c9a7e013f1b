#include "qot/recovery.hpp"

#include <cmath>

#include "qot/kernels.hpp"
#include "qot/rng.hpp"

namespace qot {

namespace {

DensityMatrix channel_output(const KrausChannel& phi, const DensityMatrix& rho) {
  const CMatrix omega = apply_channel(phi, rho.restricted());
  const double tr = std::abs(trace(omega));
  if (tr < 1e-12) fail(errc::degenerate_output, "petz_recovery: Phi(rho) is numerically zero");
  return DensityMatrix::validated(omega);
}

// tr[M (|e_m><e_n| (x) (|e_s><e_r|)^T)] with e_* the columns of evec.
// The unit is rank one, (e_m (x) conj(e_r)) (e_n (x) conj(e_s))^dagger, so the
// trace is (e_n (x) conj(e_s))^dagger M (e_m (x) conj(e_r)).
cx pair_against_unit(const CMatrix& m, const CMatrix& evec, std::size_t d, std::size_t im,
                     std::size_t in, std::size_t ir, std::size_t is) {
  cx sum = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const cx bra = std::conj(evec(i, in)) * evec(j, is);
      if (bra == cx(0.0, 0.0)) continue;
      cx inner = 0.0;
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
          inner += m(i * d + j, k * d + l) * evec(k, im) * std::conj(evec(l, ir));
      sum += bra * inner;
    }
  return sum;
}

}  // namespace

KrausChannel petz_recovery(const KrausChannel& phi, const DensityMatrix& rho) {
  if (phi.din() != rho.support_rank())
    fail(errc::domain, "petz_recovery: channel not defined on supp(rho)");
  if (phi.dout() != rho.dim())
    fail(errc::domain, "petz_recovery: channel output dimension differs from dim(rho)");

  const DensityMatrix omega = channel_output(phi, rho);
  const CMatrix sqrt_rho_v = kern::matmul(rho.sqrt_full(), rho.support_isometry());  // d-by-r
  const CMatrix pinv_w =
      kern::matmul(omega.pinv_sqrt_full(), omega.support_isometry());  // d-by-r'

  std::vector<CMatrix> kraus;
  kraus.reserve(phi.kraus_rank());
  for (const CMatrix& k : phi.kraus())
    kraus.push_back(kern::matmul(kern::matmul(sqrt_rho_v, kern::dagger(k)), pinv_w));
  return KrausChannel::validated(std::move(kraus), omega.support_rank(), rho.dim(), 1e-9);
}

TheoremReport verify_petz_swap(const KrausChannel& phi, const DensityMatrix& rho,
                               const ObservableSet& obs, const TheoremTolerances& tol) {
  TheoremReport report;
  report.tol = tol;
  report.d = rho.dim();
  report.rank_rho = rho.support_rank();
  report.kraus_rank = phi.kraus_rank();

  const Coupling pi_phi = channel_to_coupling(phi, rho);
  const DensityMatrix omega = channel_output(phi, rho);
  report.rank_omega = omega.support_rank();

  const KrausChannel rec = petz_recovery(phi, rho);
  const Coupling pi_rec = channel_to_coupling(rec, omega);
  const Coupling pi_st = swap_transpose(pi_phi);

  report.st_vs_rec_trace_distance = trace_norm(pi_st.mat() - pi_rec.mat());
  report.recovery_residual = trace_norm(apply_channel(rec, omega.restricted()) - rho.mat());
  report.cost_gap = verify_cost_equality(phi, rho, obs);

  // Matrix-unit pairings in the eigenbasis of rho: both couplings must pair
  // against |e_m><e_n| (x) (|e_s><e_r|)^T to
  // sqrt(lambda_m lambda_n) <e_r| Phi(|e_m><e_n|) |e_s>.
  const std::size_t d = rho.dim();
  const std::size_t r = rho.support_rank();
  const CMatrix& evec = rho.spectrum().eigenvectors;
  const CMatrix v = rho.support_isometry();
  double max_dev = 0.0;
  for (std::size_t m = 0; m < d; ++m)
    for (std::size_t n = 0; n < d; ++n) {
      CMatrix phi_mn;
      const bool in_support = m < r && n < r;
      if (in_support) {
        // Phi(|e_m><e_n|) with the unit expressed in the channel's input
        // coordinates: the eigenbasis unit for rank-deficient states, the
        // ambient-basis outer product for full-rank ones.
        CMatrix unit(r, r);
        if (r == d) {
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) unit(i, j) = evec(i, m) * std::conj(evec(j, n));
        } else {
          unit(m, n) = 1.0;
        }
        phi_mn = apply_channel(phi, unit);
      }
      const double weight =
          std::sqrt(rho.spectrum().eigenvalues[m] * rho.spectrum().eigenvalues[n]);
      for (std::size_t rr = 0; rr < d; ++rr)
        for (std::size_t ss = 0; ss < d; ++ss) {
          cx expected(0.0, 0.0);
          if (in_support && weight > 0.0) {
            cx elem = 0.0;
            for (std::size_t i = 0; i < d; ++i)
              for (std::size_t j = 0; j < d; ++j)
                elem += std::conj(evec(i, rr)) * phi_mn(i, j) * evec(j, ss);
            expected = weight * elem;
          }
          const cx got_st = pair_against_unit(pi_st.mat(), evec, d, m, n, rr, ss);
          const cx got_rec = pair_against_unit(pi_rec.mat(), evec, d, m, n, rr, ss);
          max_dev = std::max(max_dev, std::abs(got_st - expected));
          max_dev = std::max(max_dev, std::abs(got_rec - expected));
        }
    }
  report.matrix_unit_max_dev = max_dev;

  // Borderline flag: an eigenvalue of Phi(rho) within a factor of 10 of the
  // rank cutoff makes the pseudo-inverse rank decision fragile.
  const double cut = default_rank_tol(d) *
                     (omega.spectrum().eigenvalues.empty() ? 0.0 : omega.spectrum().eigenvalues[0]);
  for (double mu : omega.spectrum().eigenvalues)
    if (mu > cut / 10.0 && mu < cut * 10.0) report.borderline = true;

  const CostReport fwd = channel_cost(phi, rho, obs);
  const double cost_scale = std::max(1.0, fwd.channel_cost);
  report.pass = report.st_vs_rec_trace_distance <= tol.thm &&
                report.recovery_residual <= tol.rec &&
                report.cost_gap <= tol.cost * cost_scale &&
                report.matrix_unit_max_dev <= tol.unit;
  return report;
}

double verify_cost_equality(const KrausChannel& phi, const DensityMatrix& rho,
                            const ObservableSet& obs) {
  const DensityMatrix omega = channel_output(phi, rho);
  const KrausChannel rec = petz_recovery(phi, rho);

  const CostReport fwd = channel_cost(phi, rho, obs);
  const CostReport rev = channel_cost(rec, omega, obs);

  // Intermediate identity: Phi_rec(sqrt(omega) A sqrt(omega)) equals
  // sqrt(rho) Phi^dagger(A) sqrt(rho), observable by observable.
  const CMatrix s_omega = omega.sqrt_restricted();  // r'-by-d
  const CMatrix sqrt_rho_v = kern::matmul(rho.sqrt_full(), rho.support_isometry());
  for (std::size_t k = 0; k < obs.count(); ++k) {
    const CMatrix lhs = apply_channel(
        rec, kern::matmul(kern::matmul(s_omega, obs[k]), kern::dagger(s_omega)));
    const CMatrix rhs = kern::matmul(
        kern::matmul(sqrt_rho_v, adjoint_apply(phi, obs[k])), kern::dagger(sqrt_rho_v));
    if (trace_norm(lhs - rhs) > 1e-9)
      fail(errc::numeric, "verify_cost_equality: recovery identity violated for an observable");
  }
  return std::abs(fwd.channel_cost - rev.channel_cost);
}

SuiteInstance suite_instance(std::uint64_t seed, std::size_t d, std::size_t rank,
                             std::size_t trial, std::size_t observable_count) {
  const std::uint64_t base =
      derive_seed(derive_seed(derive_seed(seed, d), rank), trial);
  // Kraus ranks cycle through every feasible value for a channel from the
  // rank-dimensional support into H, i.e. 1 .. rank*d (= d^2 at full rank).
  SuiteInstance inst{
      random_state(d, rank, derive_seed(base, 1)),
      random_channel(rank, d, 1 + trial % (rank * d), derive_seed(base, 2)),
      random_observables(d, observable_count, derive_seed(base, 3)),
  };
  return inst;
}

std::vector<TheoremReport> run_theorem_suite(const SuitePlan& plan) {
  struct Slot {
    std::size_t d, rank, trial;
  };
  std::vector<Slot> slots;
  for (std::size_t d : plan.dims) {
    std::vector<std::size_t> ranks = plan.ranks;
    if (ranks.empty())
      for (std::size_t r = 1; r <= d; ++r) ranks.push_back(r);
    for (std::size_t r : ranks) {
      if (r < 1 || r > d) fail(errc::parameter, "theorem suite: rank out of range for dim");
      for (std::size_t t = 0; t < plan.trials; ++t) slots.push_back({d, r, t});
    }
  }

  std::vector<TheoremReport> reports(slots.size());
  std::exception_ptr first_error;
  // Trials are independent; reports land in (dim, rank, trial) order no
  // matter how the loop is scheduled. Exceptions may not unwind out of the
  // parallel region, so they are captured and rethrown afterwards.
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(slots.size()); ++i) {
    try {
      const Slot& s = slots[i];
      const SuiteInstance inst =
          suite_instance(plan.seed, s.d, s.rank, s.trial, plan.observable_count);
      reports[i] = verify_petz_swap(inst.phi, inst.rho, inst.obs, plan.tol);
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return reports;
}

}  // namespace qot
