#include <cmath>

#include "qot/coupling.hpp"
#include "test_helpers.hpp"

using namespace qot;
using namespace qot::test;

TEST_CASE("channel_to_coupling: identity channel reproduces the purification") {
  const DensityMatrix rho = validate_state(CMatrix::diag_real({0.7, 0.3}));
  const Coupling pi = channel_to_coupling(identity_channel(2), rho);

  const double c = std::sqrt(0.21);
  CMatrix want(4, 4);
  want(0, 0) = 0.7;
  want(0, 3) = c;
  want(3, 0) = c;
  want(3, 3) = 0.3;
  CHECK(max_abs_diff(pi.mat(), want) <= 1e-15);
  CHECK(max_abs_diff(pi.mat(), projector(canonical_purification(rho))) <= 1e-15);
}

TEST_CASE("channel_to_coupling: replacer gives the product coupling") {
  const DensityMatrix rho = random_state(3, 3, 71);
  const DensityMatrix omega = random_state(3, 2, 72);
  const Coupling pi = channel_to_coupling(replacer_channel(omega, 3), rho);
  CHECK(max_abs_diff(pi.mat(), kern::kron(omega.mat(), kern::transpose(rho.mat()))) <= 1e-13);
}

TEST_CASE("channel_to_coupling: unitary on a pure state is rank one") {
  Rng rng(73);
  const CMatrix psi = random_unit_vector(3, rng);
  const DensityMatrix rho = validate_state(projector(psi));
  REQUIRE(rho.support_rank() == 1);
  const KrausChannel u = random_channel(1, 3, 1, 74);  // isometry from supp(rho)
  const Coupling pi = channel_to_coupling(u, rho);
  const SpectralDecomposition sd = herm_eig(pi.mat());
  CHECK(sd.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 1; k < sd.eigenvalues.size(); ++k)
    CHECK(std::abs(sd.eigenvalues[k]) <= 1e-12);
}

TEST_CASE("channel_to_coupling: marginals are (Phi(rho), rho^T)") {
  for (std::size_t d = 2; d <= 5; ++d) {
    for (int rep = 0; rep < 25; ++rep) {
      const std::uint64_t s = derive_seed(4000 + d, rep);
      const std::size_t rank = 1 + rep % d;
      const DensityMatrix rho = random_state(d, rank, s);
      const KrausChannel phi = random_channel(rank, d, 1 + rep % (rank * d), derive_seed(s, 1));
      const Coupling pi = channel_to_coupling(phi, rho);
      CHECK(max_abs_diff(pi.first_marginal().mat(), apply_channel(phi, rho.restricted())) <=
            1e-10);
      CHECK(max_abs_diff(pi.second_marginal_T(), kern::transpose(rho.mat())) <= 1e-10);
      CHECK(std::abs(trace(pi.mat()).real() - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("channel_to_coupling: coupling matrices are PSD") {
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t d = 2 + rep % 4;
    const DensityMatrix rho = random_state(d, 1 + rep % d, derive_seed(505, rep));
    const KrausChannel phi =
        random_channel(rho.support_rank(), d, 1 + rep % (rho.support_rank() * d), derive_seed(506, rep));
    const Coupling pi = channel_to_coupling(phi, rho);
    CHECK_NOTHROW(static_cast<void>(Coupling::validated(pi.mat(), d)));
  }
}

TEST_CASE("channel_to_coupling: domain errors") {
  const DensityMatrix rho = random_state(3, 2, 81);
  CHECK_THROWS_AS(static_cast<void>(channel_to_coupling(identity_channel(3), rho)), Error);
  CHECK_THROWS_AS(static_cast<void>(channel_to_coupling(random_channel(2, 2, 1, 82), rho)),
                  Error);
}

TEST_CASE("marginals accessor returns the cached pair") {
  const DensityMatrix rho = random_state(2, 2, 83);
  const Coupling pi = channel_to_coupling(identity_channel(2), rho);
  const auto [omega, rho_t] = marginals(pi);
  CHECK(max_abs_diff(omega.mat(), rho.mat()) <= 1e-12);
  CHECK(max_abs_diff(rho_t, kern::transpose(rho.mat())) <= 1e-12);
}

TEST_CASE("swap_transpose: products, fixed point, involution, marginals") {
  const DensityMatrix rho = random_state(3, 3, 91);
  const DensityMatrix omega = random_state(3, 3, 92);

  const Coupling prod = channel_to_coupling(replacer_channel(omega, 3), rho);
  const Coupling swapped = swap_transpose(prod);
  CHECK(max_abs_diff(swapped.mat(), kern::kron(rho.mat(), kern::transpose(omega.mat()))) <=
        1e-13);

  // |sqrt(rho)>><<sqrt(rho)| is a fixed point (sqrt(rho) is Hermitian).
  const Coupling pure = channel_to_coupling(identity_channel(3), rho);
  CHECK(max_abs_diff(swap_transpose(pure).mat(), pure.mat()) == 0.0);

  // Involution, exactly.
  const Coupling back = swap_transpose(swapped);
  CHECK(max_abs_diff(back.mat(), prod.mat()) == 0.0);

  // Marginals swap and transpose: the swap lies in C(omega, rho).
  const KrausChannel phi = random_channel(3, 3, 4, 93);
  const Coupling pi = channel_to_coupling(phi, rho);
  const Coupling st = swap_transpose(pi);
  CHECK(max_abs_diff(st.first_marginal().mat(), kern::transpose(pi.second_marginal_T())) <=
        1e-12);
  CHECK(max_abs_diff(st.second_marginal_T(), kern::transpose(pi.first_marginal().mat())) <=
        1e-12);
}

TEST_CASE("swap_transpose: preserves validity on random couplings") {
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t d = 2 + rep % 4;
    const DensityMatrix rho = random_state(d, 1 + rep % d, derive_seed(9100, rep));
    const KrausChannel phi =
        random_channel(rho.support_rank(), d, 1 + rep % (rho.support_rank() * d), derive_seed(9200, rep));
    const Coupling st = swap_transpose(channel_to_coupling(phi, rho));
    CHECK_NOTHROW(static_cast<void>(Coupling::validated(st.mat(), d)));
  }
}

TEST_CASE("coupling_to_channel: closed-form inverses") {
  const DensityMatrix rho = random_state(3, 3, 95);

  // Identity-channel coupling -> identity on supp(rho).
  const Coupling pure = channel_to_coupling(identity_channel(3), rho);
  const KrausChannel id_rec = coupling_to_channel(pure, rho);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      CMatrix unit(3, 3);
      unit(i, j) = 1.0;
      CHECK(trace_norm(apply_channel(id_rec, unit) - unit) <= 1e-8);
    }

  // Product coupling -> the replacer.
  const DensityMatrix omega = random_state(3, 2, 96);
  const Coupling prod = channel_to_coupling(replacer_channel(omega, 3), rho);
  const KrausChannel rep_rec = coupling_to_channel(prod, rho);
  for (int rep_i = 0; rep_i < 5; ++rep_i) {
    const DensityMatrix x = random_state(3, 3, derive_seed(97, rep_i));
    CHECK(trace_norm(apply_channel(rep_rec, x.mat()) - omega.mat()) <= 1e-9);
  }
}

TEST_CASE("coupling_to_channel: round trip including rank-deficient states") {
  for (std::size_t d = 2; d <= 5; ++d) {
    for (int rep = 0; rep < 25; ++rep) {
      const std::uint64_t s = derive_seed(6000 + d, rep);
      const std::size_t rank = 1 + rep % d;
      const DensityMatrix rho = random_state(d, rank, s);
      const KrausChannel phi = random_channel(rank, d, 1 + rep % (rank * d), derive_seed(s, 1));
      const Coupling pi = channel_to_coupling(phi, rho);
      const KrausChannel back = coupling_to_channel(pi, rho);
      CHECK(back.din() == rank);

      // Round-trip contract in trace norm.
      const Coupling pi2 = channel_to_coupling(back, rho);
      CHECK(trace_norm(pi2.mat() - pi.mat()) <= 1e-8);

      // Channel agreement on a matrix-unit basis of supp(rho).
      for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = 0; j < rank; ++j) {
          CMatrix unit(rank, rank);
          unit(i, j) = 1.0;
          CHECK(trace_norm(apply_channel(back, unit) - apply_channel(phi, unit)) <= 1e-8);
        }
    }
  }
}

TEST_CASE("coupling_to_channel: rejects a coupling of a different state") {
  const DensityMatrix rho = random_state(3, 3, 98);
  const DensityMatrix other = random_state(3, 3, 99);
  const Coupling pi = channel_to_coupling(identity_channel(3), rho);
  CHECK_THROWS_AS(static_cast<void>(coupling_to_channel(pi, other)), Error);
  try {
    static_cast<void>(coupling_to_channel(pi, other));
  } catch (const Error& e) {
    CHECK(e.code() == errc::not_a_coupling);
  }
}

TEST_CASE("pure marginals force the product coupling") {
  for (int rep = 0; rep < 10; ++rep) {
    Rng rng(derive_seed(777, rep));
    const std::size_t d = 2 + rep % 3;
    const CMatrix psi = random_unit_vector(d, rng);
    const CMatrix phi_vec = random_unit_vector(d, rng);
    const DensityMatrix rho = validate_state(projector(psi));
    const DensityMatrix sigma = validate_state(projector(phi_vec));

    const Coupling pi = channel_to_coupling(replacer_channel(sigma, 1), rho);
    CHECK(max_abs_diff(pi.mat(), kern::kron(sigma.mat(), kern::transpose(rho.mat()))) <= 1e-8);
    CHECK(max_abs_diff(pi.mat(), kern::kron(pi.first_marginal().mat(),
                                            pi.second_marginal_T())) <= 1e-8);
  }
}
