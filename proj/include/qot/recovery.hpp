#pragma once

#include "qot/cost.hpp"

namespace qot {

struct TheoremTolerances {
  double thm = 1e-9;   // trace-norm distance between the swapped and recovery couplings
  double rec = 1e-9;   // trace norm of Phi_rec(Phi(rho)) - rho
  double cost = 1e-9;  // cost gap, relative to max(1, cost)
  double unit = 1e-9;  // matrix-unit pairing deviation
};

struct TheoremReport {
  double st_vs_rec_trace_distance = 0.0;
  double recovery_residual = 0.0;
  double cost_gap = 0.0;
  double matrix_unit_max_dev = 0.0;
  std::size_t d = 0;
  std::size_t rank_rho = 0;
  std::size_t rank_omega = 0;
  std::size_t kraus_rank = 0;
  bool borderline = false;  // Phi(rho) has an eigenvalue near the rank cutoff
  bool pass = false;
  TheoremTolerances tol;
};

// Recovery channel with Kraus operators sqrt(rho) K_m^dagger pinv_sqrt(Phi(rho)),
// defined on supp(Phi(rho)) with codomain H. Trace preserving by construction
// and reverses the action of phi on rho.
KrausChannel petz_recovery(const KrausChannel& phi, const DensityMatrix& rho);

// Builds Pi_Phi and Pi_rec, reports the trace-norm distance between the
// swap-transposed Pi_Phi and Pi_rec, the recovery residual, the cost gap,
// and the maximal deviation of both couplings' matrix-unit pairings from
// sqrt(lambda_m lambda_n) <e_r| Phi(|e_m><e_n|) |e_s> over the eigenbasis.
TheoremReport verify_petz_swap(const KrausChannel& phi, const DensityMatrix& rho,
                               const ObservableSet& obs, const TheoremTolerances& tol = {});

// |cost(phi; rho->omega) - cost(petz(phi); omega->rho)|. Also checks the
// intermediate identity Phi_rec(sqrt(omega) A sqrt(omega)) =
// sqrt(rho) Phi^dagger(A) sqrt(rho) for every observable.
double verify_cost_equality(const KrausChannel& phi, const DensityMatrix& rho,
                            const ObservableSet& obs);

// Seeded instance sweep shared by the CLI and the acceptance suite: for each
// dimension, each state rank 1..d and each trial, draws (rho, Phi, A) with
// the Kraus rank cycling through 1..d^2 and runs verify_petz_swap. Reports
// are ordered by (dim, rank, trial) regardless of execution order.
struct SuitePlan {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> ranks;  // empty = all ranks 1..d
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t observable_count = 2;
  TheoremTolerances tol;
};

std::vector<TheoremReport> run_theorem_suite(const SuitePlan& plan);

// The (rho, Phi, A) triple the suite uses for one instance; exposed so other
// consumers can replay exactly the instances the suite verified.
struct SuiteInstance {
  DensityMatrix rho;
  KrausChannel phi;
  ObservableSet obs;
};

SuiteInstance suite_instance(std::uint64_t seed, std::size_t d, std::size_t rank,
                             std::size_t trial, std::size_t observable_count);

}  // namespace qot
