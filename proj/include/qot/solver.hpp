#pragma once

#include "qot/cost.hpp"

namespace qot {

// Low-rank factorized minimization of tr(Pi C_A) over couplings of
// (rho, omega): Pi = L L^dagger with quadratic marginal/trace penalties and
// restart aggregation. penalty_schedule entries are successive multiplicative
// escalation factors (the k-th stage weight is the product of the first k
// entries). Values are upper estimates with feasibility certificates, never
// claimed-optimal.
struct SolverConfig {
  std::size_t factor_rank = 0;  // 0 selects d^2 (full rank)
  std::size_t restarts = 8;
  std::size_t max_iters = 5000;  // per penalty stage
  std::vector<double> penalty_schedule{10.0, 100.0, 1000.0};
  double step_init = 1e-2;
  double grad_tol = 1e-8;
  double feas_tol = 1e-6;
  std::uint64_t seed = 0;
};

struct SolverResult {
  double value = 0.0;                    // cost of the polished coupling
  Coupling coupling;                     // best iterate after trace renormalization
  double feasibility_residual = 0.0;     // max marginal trace-norm error
  std::vector<double> per_restart_values;
  std::size_t iterations_used = 0;       // total iterations of the winning restart
};

SolverResult solve(const DensityMatrix& rho, const DensityMatrix& omega,
                   const ObservableSet& obs, const SolverConfig& cfg);

// Closed-form anchor: pure marginals force the product coupling, so the cost
// is sum_k( <phi|A^2|phi> + <psi|A^2|psi> - 2 <phi|A|phi><psi|A|psi> ).
double pure_state_cost(const CMatrix& psi, const CMatrix& phi_vec, const ObservableSet& obs);

// Min channel cost over a canonical menu: the replacer to omega, the
// eigenbasis-matching unitary when the sorted spectra agree and it actually
// maps rho to omega, and the identity when omega equals rho. Always an upper
// bound for the solver value up to feasibility tolerance.
double candidate_bound(const DensityMatrix& rho, const DensityMatrix& omega,
                       const ObservableSet& obs);

// |solve(rho,omega) - solve(omega,rho)|; also verifies that the swap
// transpose of the returned coupling has the same cost (an exact identity,
// independent of solver optimality).
double symmetry_check(const DensityMatrix& rho, const DensityMatrix& omega,
                      const ObservableSet& obs, const SolverConfig& cfg);

}  // namespace qot
