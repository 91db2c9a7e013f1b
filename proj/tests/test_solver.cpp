#include <cmath>

#include "qot/solver.hpp"
#include "test_helpers.hpp"

using namespace qot;
using namespace qot::test;

namespace {

ObservableSet sigma_z_set() { return ObservableSet::validated({pauli_z()}); }

SolverConfig quick_cfg(std::uint64_t seed) {
  SolverConfig cfg;
  cfg.seed = seed;
  cfg.restarts = 4;
  cfg.max_iters = 2000;
  return cfg;
}

}  // namespace

TEST_CASE("pure_state_cost: frozen qubit values") {
  const CMatrix ket0 = ket(2, 0), ket1 = ket(2, 1), plus = plus_state_vec();
  CHECK(pure_state_cost(ket0, ket0, sigma_z_set()) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(pure_state_cost(ket0, ket1, sigma_z_set()) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(pure_state_cost(ket0, plus, sigma_z_set()) == doctest::Approx(2.0).epsilon(1e-14));

  CMatrix not_unit(2, 1, {2.0, 0.0});
  CHECK_THROWS_AS(static_cast<void>(pure_state_cost(not_unit, ket0, sigma_z_set())), Error);
}

TEST_CASE("solve: zero-cost and pure-pair anchors") {
  const DensityMatrix ket0 = validate_state(CMatrix::diag_real({1.0, 0.0}));
  const SolverResult same = solve(ket0, ket0, sigma_z_set(), quick_cfg(301));
  CHECK(same.value <= 1e-8);
  CHECK(same.value >= -1e-8);

  const DensityMatrix ket1 = validate_state(CMatrix::diag_real({0.0, 1.0}));
  const SolverResult flip = solve(ket0, ket1, sigma_z_set(), quick_cfg(302));
  CHECK(std::abs(flip.value - 4.0) <= 1e-5);
  CHECK(flip.feasibility_residual <= 1e-5);
}

TEST_CASE("solve: matches pure_state_cost on random pure pairs") {
  for (int rep = 0; rep < 6; ++rep) {
    const std::size_t d = 2 + rep % 2;
    Rng rng(derive_seed(303, rep));
    const CMatrix psi = random_unit_vector(d, rng);
    const CMatrix phi_vec = random_unit_vector(d, rng);
    const ObservableSet obs = random_observables(d, 1 + rep % 2, derive_seed(304, rep));
    const DensityMatrix rho = validate_state(projector(psi));
    const DensityMatrix sigma = validate_state(projector(phi_vec));
    const SolverResult res = solve(rho, sigma, obs, quick_cfg(derive_seed(305, rep)));
    const double want = pure_state_cost(psi, phi_vec, obs);
    CAPTURE(rep);
    CHECK(std::abs(res.value - want) <= 1e-5);
    CHECK(res.feasibility_residual <= 1e-5);
  }
}

TEST_CASE("solve: dominated by the candidate bound") {
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t d = 2 + rep % 2;
    const DensityMatrix rho = random_state(d, d, derive_seed(306, rep));
    const DensityMatrix omega = random_state(d, 1 + rep % d, derive_seed(307, rep));
    const ObservableSet obs = random_observables(d, 1 + rep % 2, derive_seed(308, rep));
    const SolverResult res = solve(rho, omega, obs, quick_cfg(derive_seed(309, rep)));
    CHECK(res.value <= candidate_bound(rho, omega, obs) + 1e-6);
    CHECK(res.value >= -1e-8);
  }
}

TEST_CASE("solve: deterministic, value ties to the coupling, restarts monotone") {
  const DensityMatrix rho = random_state(3, 3, 310);
  const DensityMatrix omega = random_state(3, 3, 311);
  const ObservableSet obs = random_observables(3, 2, 312);
  const SolverConfig cfg = quick_cfg(313);

  const SolverResult a = solve(rho, omega, obs, cfg);
  const SolverResult b = solve(rho, omega, obs, cfg);
  CHECK(a.value == b.value);
  CHECK(a.iterations_used == b.iterations_used);
  CHECK(max_abs_diff(a.coupling.mat(), b.coupling.mat()) == 0.0);
  REQUIRE(a.per_restart_values.size() == b.per_restart_values.size());
  for (std::size_t i = 0; i < a.per_restart_values.size(); ++i)
    CHECK(a.per_restart_values[i] == b.per_restart_values[i]);

  CHECK(std::abs(a.value - coupling_cost(a.coupling, obs)) <=
        1e-8 * std::max(1.0, std::abs(a.value)));

  SolverConfig fewer = cfg;
  fewer.restarts = 2;
  const SolverResult c = solve(rho, omega, obs, fewer);
  CHECK(a.value <= c.value + 1e-12);

  // Per-restart values aggregate by minimum.
  double best = a.per_restart_values[0];
  for (double v : a.per_restart_values) best = std::min(best, v);
  CHECK(a.value == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("candidate_bound: menu anchors") {
  const DensityMatrix rho = random_state(3, 3, 314);
  CHECK(std::abs(candidate_bound(rho, rho, ObservableSet::validated({CMatrix::identity(3)}))) <=
        1e-12);

  const DensityMatrix ket0 = validate_state(CMatrix::diag_real({1.0, 0.0}));
  const DensityMatrix ket1 = validate_state(CMatrix::diag_real({0.0, 1.0}));
  CHECK(candidate_bound(ket0, ket1, sigma_z_set()) == doctest::Approx(4.0).epsilon(1e-12));

  // For omega == rho the identity joins the menu and caps the bound.
  const ObservableSet obs = random_observables(3, 2, 315);
  const double self_bound = candidate_bound(rho, rho, obs);
  const double id_cost = channel_cost(identity_on_support(rho), rho, obs).channel_cost;
  CHECK(self_bound <= id_cost + 1e-12);
}

TEST_CASE("symmetry_check: solver-level and coupling-level symmetry") {
  const DensityMatrix ket0 = validate_state(CMatrix::diag_real({1.0, 0.0}));
  const DensityMatrix plus = validate_state(projector(plus_state_vec()));
  const double delta = symmetry_check(ket0, plus, sigma_z_set(), quick_cfg(316));
  CHECK(delta <= 2e-5);

  const DensityMatrix rho = random_state(2, 2, 317);
  CHECK(symmetry_check(rho, rho, random_observables(2, 1, 318), quick_cfg(319)) <= 2e-5);
}
