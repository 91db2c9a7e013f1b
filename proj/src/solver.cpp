#include "qot/solver.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <sstream>

#include "qot/kernels.hpp"
#include "qot/rng.hpp"

namespace qot {

namespace {

// Objective machinery for one (rho, omega, A) instance. The factor L is
// d^2-by-p; everything here is single-threaded (restarts parallelize above).
class PenaltyObjective {
 public:
  PenaltyObjective(const DensityMatrix& rho, const DensityMatrix& omega,
                   const ObservableSet& obs)
      : d_(rho.dim()),
        obs_(obs),
        target_first_(omega.mat()),
        target_second_(kern::transpose(rho.mat())) {
    if (d_ <= 8) cost_mat_ = cost_operator(obs).mat();
  }

  std::size_t d() const { return d_; }

  // tr2(LL^dagger) and tr1(LL^dagger) without forming LL^dagger.
  void factor_marginals(const CMatrix& l, CMatrix& m_first, CMatrix& m_second) const {
    const std::size_t p = l.cols();
    m_first = CMatrix(d_, d_);
    m_second = CMatrix(d_, d_);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t k = 0; k < d_; ++k) {
        cx s = 0.0;
        for (std::size_t j = 0; j < d_; ++j)
          for (std::size_t c = 0; c < p; ++c)
            s += l(i * d_ + j, c) * std::conj(l(k * d_ + j, c));
        m_first(i, k) = s;
      }
    for (std::size_t j = 0; j < d_; ++j)
      for (std::size_t t = 0; t < d_; ++t) {
        cx s = 0.0;
        for (std::size_t i = 0; i < d_; ++i)
          for (std::size_t c = 0; c < p; ++c)
            s += l(i * d_ + j, c) * std::conj(l(i * d_ + t, c));
        m_second(j, t) = s;
      }
  }

  CMatrix apply_cost(const CMatrix& l) const {
    if (cost_mat_.rows() > 0) return kern::matmul(cost_mat_, l);
    // Structural route: column-wise vec(A^2 X + X A^2 - 2 A X A).
    const std::size_t p = l.cols();
    CMatrix out(d_ * d_, p);
    for (std::size_t c = 0; c < p; ++c) {
      CMatrix x(d_, d_);
      for (std::size_t i = 0; i < d_ * d_; ++i) x.data()[i] = l(i, c);
      CMatrix y(d_, d_);
      for (std::size_t k = 0; k < obs_.count(); ++k) {
        const CMatrix& a = obs_[k];
        const CMatrix a2 = kern::matmul(a, a);
        y += kern::matmul(a2, x);
        y += kern::matmul(x, a2);
        y -= 2.0 * kern::matmul(kern::matmul(a, x), a);
      }
      for (std::size_t i = 0; i < d_ * d_; ++i) out(i, c) = y.entries()[i];
    }
    return out;
  }

  double value(const CMatrix& l, double mu) const {
    CMatrix m1, m2;
    factor_marginals(l, m1, m2);
    const CMatrix cl = apply_cost(l);
    double f = hs_inner(l, cl).real();
    m1 -= target_first_;
    m2 -= target_second_;
    double tr = 0.0;
    for (const cx& z : l.entries()) tr += std::norm(z);
    const double pen = frobenius_norm(m1) * frobenius_norm(m1) +
                       frobenius_norm(m2) * frobenius_norm(m2) + (tr - 1.0) * (tr - 1.0);
    return f + mu * pen;
  }

  double value_and_grad(const CMatrix& l, double mu, CMatrix& grad) const {
    const std::size_t p = l.cols();
    CMatrix m1, m2;
    factor_marginals(l, m1, m2);
    const CMatrix cl = apply_cost(l);
    double f = hs_inner(l, cl).real();
    m1 -= target_first_;
    m2 -= target_second_;
    double tr = 0.0;
    for (const cx& z : l.entries()) tr += std::norm(z);
    const double pen = frobenius_norm(m1) * frobenius_norm(m1) +
                       frobenius_norm(m2) * frobenius_norm(m2) + (tr - 1.0) * (tr - 1.0);

    // grad = C L + 2 mu [ (R1 (x) I) L + (I (x) R2) L + (tr-1) L ]
    grad = cl;
    const double w = 2.0 * mu;
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j)
        for (std::size_t c = 0; c < p; ++c) {
          cx s = 0.0;
          for (std::size_t k = 0; k < d_; ++k) s += m1(i, k) * l(k * d_ + j, c);
          for (std::size_t t = 0; t < d_; ++t) s += m2(j, t) * l(i * d_ + t, c);
          grad(i * d_ + j, c) += w * (s + (tr - 1.0) * l(i * d_ + j, c));
        }
    return f + mu * pen;
  }

 private:
  std::size_t d_;
  const ObservableSet& obs_;
  CMatrix target_first_;   // omega
  CMatrix target_second_;  // rho^T
  CMatrix cost_mat_;       // materialized for d <= 8
};

struct RestartOutcome {
  CMatrix l;
  double value = 0.0;           // polished coupling cost
  CMatrix coupling_mat;         // polished LL^dagger
  double feas_residual = 0.0;   // max marginal trace-norm error
  std::size_t iterations = 0;
  double final_grad_norm = 0.0;
  bool hit_max_iters = false;
};

void normalize_trace(CMatrix& l) {
  double tr = 0.0;
  for (const cx& z : l.entries()) tr += std::norm(z);
  if (tr > 0.0) l *= cx(1.0 / std::sqrt(tr), 0.0);
}

// Product coupling factor: columns sqrt(mu_j lambda_i) (w_j (x) conj(v_i)),
// heaviest weights first, truncated to p columns. Exactly feasible when p
// can hold rank(omega)*rank(rho) columns.
CMatrix product_coupling_factor(const DensityMatrix& rho, const DensityMatrix& omega,
                                std::size_t p) {
  const std::size_t d = rho.dim();
  struct Term {
    double w;
    std::size_t i, j;
  };
  std::vector<Term> terms;
  for (std::size_t j = 0; j < omega.support_rank(); ++j)
    for (std::size_t i = 0; i < rho.support_rank(); ++i)
      terms.push_back({omega.spectrum().eigenvalues[j] * rho.spectrum().eigenvalues[i], i, j});
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.w > b.w; });
  CMatrix l(d * d, p);
  const std::size_t ncols = std::min(p, terms.size());
  for (std::size_t c = 0; c < ncols; ++c) {
    const Term& t = terms[c];
    const double w = std::sqrt(t.w);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        l(a * d + b, c) = w * omega.spectrum().eigenvectors(a, t.j) *
                          std::conj(rho.spectrum().eigenvectors(b, t.i));
  }
  return l;
}

bool spectra_match(const DensityMatrix& rho, const DensityMatrix& omega, double tol) {
  if (rho.dim() != omega.dim()) return false;
  for (std::size_t i = 0; i < rho.dim(); ++i)
    if (std::abs(rho.spectrum().eigenvalues[i] - omega.spectrum().eigenvalues[i]) > tol)
      return false;
  return true;
}

// Rank-one factor vec(U sqrt(rho)) for U = W V^dagger: the coupling of the
// eigenbasis-matching unitary channel.
CMatrix unitary_coupling_factor(const DensityMatrix& rho, const DensityMatrix& omega,
                                std::size_t p) {
  const std::size_t d = rho.dim();
  const CMatrix u =
      kern::matmul(omega.spectrum().eigenvectors, kern::dagger(rho.spectrum().eigenvectors));
  const CMatrix m = kern::matmul(u, rho.sqrt_full());
  CMatrix l(d * d, p);
  for (std::size_t i = 0; i < d * d; ++i) l(i, 0) = m.entries()[i];
  return l;
}

RestartOutcome run_restart(const PenaltyObjective& objective, CMatrix l,
                           const SolverConfig& cfg, const ObservableSet& obs,
                           const CMatrix& target_first, const CMatrix& target_second) {
  RestartOutcome out;
  double mu = 1.0;
  double grad_norm = 0.0;
  bool last_stage_hit_max = false;
  for (double factor : cfg.penalty_schedule) {
    mu *= factor;
    CMatrix grad;
    double f = objective.value_and_grad(l, mu, grad);
    // Barzilai-Borwein trial steps under a nonmonotone (last-10-max) Armijo
    // rule; the spectral step is what keeps the stiff late penalty stages
    // tractable, and it needs the nonmonotone acceptance to work.
    CMatrix prev_l, prev_grad;
    bool have_pair = false;
    double step = cfg.step_init;
    std::vector<double> recent{f};
    double f_best = f;
    std::size_t stagnant = 0;
    std::size_t it = 0;
    last_stage_hit_max = false;
    for (; it < cfg.max_iters; ++it) {
      double g2 = 0.0;
      for (const cx& z : grad.entries()) g2 += std::norm(z);
      // The penalty part scales the gradient linearly in mu; convergence is
      // judged on the mu-normalized norm so every stage uses the same bar.
      grad_norm = std::sqrt(g2) / std::max(1.0, mu);
      if (grad_norm <= cfg.grad_tol) break;

      if (have_pair) {
        double sy = 0.0, yy = 0.0;
        for (std::size_t i = 0; i < l.size(); ++i) {
          const cx s = l.entries()[i] - prev_l.entries()[i];
          const cx y = grad.entries()[i] - prev_grad.entries()[i];
          sy += (std::conj(s) * y).real();
          yy += std::norm(y);
        }
        if (sy > 0.0 && yy > 0.0) step = std::max(1e-12, std::min(sy / yy, 1e6));
      }

      double f_ref = recent[0];
      for (double v : recent) f_ref = std::max(f_ref, v);
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        CMatrix trial = l;
        for (std::size_t i = 0; i < trial.size(); ++i)
          trial.data()[i] -= step * grad.entries()[i];
        const double f_trial = objective.value(trial, mu);
        if (f_trial <= f_ref - 1e-4 * step * 2.0 * g2) {
          prev_l = std::move(l);
          prev_grad = grad;
          have_pair = true;
          l = std::move(trial);
          f = f_trial;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;  // no descent at the smallest step: stage is done

      recent.push_back(f);
      if (recent.size() > 10) recent.erase(recent.begin());
      if (f < f_best - 1e-14 * std::max(1.0, std::abs(f_best))) {
        f_best = f;
        stagnant = 0;
      } else {
        ++stagnant;
      }
      if (stagnant >= 100) break;
      f = objective.value_and_grad(l, mu, grad);
    }
    out.iterations += it;
    last_stage_hit_max = (it == cfg.max_iters);
    if (std::getenv("QOT_SOLVER_TRACE"))
      std::fprintf(stderr, "stage mu=%g it=%zu f=%.6g grad=%.3g step=%.3g stagnant=%zu\n", mu,
                   it, f, grad_norm, step, stagnant);
  }
  out.final_grad_norm = grad_norm;
  out.hit_max_iters = last_stage_hit_max;

  normalize_trace(l);
  const std::size_t d = objective.d();
  CMatrix pi(d * d, d * d);
  for (std::size_t i = 0; i < d * d; ++i)
    for (std::size_t j = 0; j < d * d; ++j) {
      cx s = 0.0;
      for (std::size_t c = 0; c < l.cols(); ++c) s += l(i, c) * std::conj(l(j, c));
      pi(i, j) = s;
    }
  // Exact Hermitian symmetry keeps downstream validation clean.
  for (std::size_t i = 0; i < d * d; ++i)
    for (std::size_t j = i; j < d * d; ++j) {
      const cx v = 0.5 * (pi(i, j) + std::conj(pi(j, i)));
      pi(i, j) = v;
      pi(j, i) = std::conj(v);
    }
  out.coupling_mat = pi;
  out.l = std::move(l);

  const ValidationTol relaxed{1e-8, 10.0 * cfg.feas_tol, 10.0 * cfg.feas_tol};
  const Coupling coupling = Coupling::from_psd_construction(out.coupling_mat, d, relaxed);
  out.value = coupling_cost(coupling, obs);
  out.feas_residual =
      std::max(trace_norm(coupling.first_marginal().mat() - target_first),
               trace_norm(coupling.second_marginal_T() - target_second));
  return out;
}

}  // namespace

SolverResult solve(const DensityMatrix& rho, const DensityMatrix& omega,
                   const ObservableSet& obs, const SolverConfig& cfg) {
  const std::size_t d = rho.dim();
  if (omega.dim() != d || obs.dim() != d)
    fail(errc::dimension_mismatch, "solve: dimensions differ");
  if (cfg.restarts < 1 || cfg.max_iters < 1 || cfg.step_init <= 0.0 || cfg.grad_tol <= 0.0 ||
      cfg.feas_tol <= 0.0 || cfg.penalty_schedule.empty())
    fail(errc::parameter, "solve: configuration values must be positive");
  const std::size_t p = cfg.factor_rank == 0 ? d * d : cfg.factor_rank;
  if (p > d * d) fail(errc::parameter, "solve: factor_rank exceeds d^2");

  const PenaltyObjective objective(rho, omega, obs);
  const bool unitary_start = spectra_match(rho, omega, 1e-10);

  std::vector<RestartOutcome> outcomes(cfg.restarts);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t rix = 0; rix < static_cast<std::ptrdiff_t>(cfg.restarts); ++rix) {
    CMatrix l0;
    if (rix == 0) {
      l0 = product_coupling_factor(rho, omega, p);
    } else if (rix == 1 && unitary_start) {
      l0 = unitary_coupling_factor(rho, omega, p);
    } else {
      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(rix)));
      l0 = gaussian_matrix(d * d, p, rng);
      normalize_trace(l0);
    }
    outcomes[rix] = run_restart(objective, std::move(l0), cfg, obs, omega.mat(),
                                kern::transpose(rho.mat()));
  }

  // Deterministic aggregation: among restarts within the feasibility budget
  // the lowest value wins (ties to the lowest index); an infeasible iterate
  // may undercut the optimum, so it can only win when nothing is feasible,
  // and then the smallest residual is preferred.
  const double feas_budget = 10.0 * cfg.feas_tol;
  std::size_t best = 0;
  bool best_feasible = outcomes[0].feas_residual <= feas_budget;
  for (std::size_t i = 1; i < outcomes.size(); ++i) {
    const bool fi = outcomes[i].feas_residual <= feas_budget;
    const bool better =
        (fi && !best_feasible) ||
        (fi == best_feasible &&
         (fi ? outcomes[i].value < outcomes[best].value - 1e-12
             : outcomes[i].feas_residual < outcomes[best].feas_residual - 1e-15));
    if (better) {
      best = i;
      best_feasible = fi;
    }
  }

  bool any_converged = false;
  for (const RestartOutcome& o : outcomes)
    if (!(o.hit_max_iters && o.final_grad_norm > 1e3 * cfg.grad_tol)) any_converged = true;
  if (!any_converged) {
    std::ostringstream msg;
    msg << "solve: no restart converged (best penalty-scaled gradient norm "
        << outcomes[best].final_grad_norm << " after " << outcomes[best].iterations
        << " iterations)";
    fail(errc::solver_failure, msg.str());
  }

  SolverResult result;
  const ValidationTol relaxed{1e-8, 10.0 * cfg.feas_tol, 10.0 * cfg.feas_tol};
  result.coupling = Coupling::from_psd_construction(outcomes[best].coupling_mat, d, relaxed);
  result.value = outcomes[best].value;
  result.iterations_used = outcomes[best].iterations;
  result.per_restart_values.reserve(outcomes.size());
  for (const RestartOutcome& o : outcomes) result.per_restart_values.push_back(o.value);

  const double res_first = trace_norm(result.coupling.first_marginal().mat() - omega.mat());
  const double res_second =
      trace_norm(result.coupling.second_marginal_T() - kern::transpose(rho.mat()));
  result.feasibility_residual = std::max(res_first, res_second);
  return result;
}

double pure_state_cost(const CMatrix& psi, const CMatrix& phi_vec, const ObservableSet& obs) {
  if (psi.cols() != 1 || phi_vec.cols() != 1 || psi.rows() != phi_vec.rows() ||
      psi.rows() != obs.dim())
    fail(errc::dimension_mismatch, "pure_state_cost: expected matching column vectors");
  const double npsi = frobenius_norm(psi), nphi = frobenius_norm(phi_vec);
  if (std::abs(npsi - 1.0) > 1e-10 || std::abs(nphi - 1.0) > 1e-10)
    fail(errc::parameter, "pure_state_cost: vectors must be unit norm");

  auto expect = [](const CMatrix& a, const CMatrix& v) {
    return hs_inner(v, kern::matmul(a, v)).real();
  };
  double total = 0.0;
  for (std::size_t k = 0; k < obs.count(); ++k) {
    const CMatrix a2 = kern::matmul(obs[k], obs[k]);
    total += expect(a2, phi_vec) + expect(a2, psi) -
             2.0 * expect(obs[k], phi_vec) * expect(obs[k], psi);
  }
  return total;
}

double candidate_bound(const DensityMatrix& rho, const DensityMatrix& omega,
                       const ObservableSet& obs) {
  if (rho.dim() != omega.dim() || obs.dim() != rho.dim())
    fail(errc::dimension_mismatch, "candidate_bound: dimensions differ");

  double best = channel_cost(replacer_channel(omega, rho.support_rank()), rho, obs).channel_cost;

  if (spectra_match(rho, omega, 1e-10)) {
    const CMatrix u =
        kern::matmul(omega.spectrum().eigenvectors, kern::dagger(rho.spectrum().eigenvectors));
    const CMatrix k = kern::matmul(u, rho.support_isometry());
    const KrausChannel perm =
        KrausChannel::validated({k}, rho.support_rank(), rho.dim(), 1e-9);
    if (trace_norm(apply_channel(perm, rho.restricted()) - omega.mat()) <= 1e-8)
      best = std::min(best, channel_cost(perm, rho, obs).channel_cost);
  }
  if (trace_norm(rho.mat() - omega.mat()) <= 1e-12)
    best = std::min(best, channel_cost(identity_on_support(rho), rho, obs).channel_cost);
  return best;
}

double symmetry_check(const DensityMatrix& rho, const DensityMatrix& omega,
                      const ObservableSet& obs, const SolverConfig& cfg) {
  const SolverResult forward = solve(rho, omega, obs, cfg);
  const SolverResult backward = solve(omega, rho, obs, cfg);
  const double swap_gap =
      std::abs(coupling_cost(swap_transpose(forward.coupling), obs) - forward.value);
  if (swap_gap > 1e-8)
    fail(errc::numeric, "symmetry_check: swap transpose changed the coupling cost");
  return std::abs(forward.value - backward.value);
}

}  // namespace qot
