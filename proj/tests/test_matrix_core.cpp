#include <cmath>

#include "qot/linalg.hpp"
#include "test_helpers.hpp"

using namespace qot;
using namespace qot::test;

TEST_CASE("kron: identities and frozen values") {
  const CMatrix i2 = CMatrix::identity(2);
  CHECK(max_abs_diff(kern::kron(i2, i2), CMatrix::identity(4)) == 0.0);

  const CMatrix got = kern::kron(pauli_x(), pauli_z());
  const CMatrix want{{0.0, 0.0, 1.0, 0.0},
                     {0.0, 0.0, 0.0, -1.0},
                     {1.0, 0.0, 0.0, 0.0},
                     {0.0, -1.0, 0.0, 0.0}};
  CHECK(max_abs_diff(got, want) == 0.0);

  // Entrywise products by hand: diag(2,3) (x) diag(5,7) = diag(10,14,15,21).
  const CMatrix d1 = CMatrix::diag_real({2.0, 3.0});
  const CMatrix d2 = CMatrix::diag_real({5.0, 7.0});
  CHECK(max_abs_diff(kern::kron(d1, d2), CMatrix::diag_real({10.0, 14.0, 15.0, 21.0})) == 0.0);
}

TEST_CASE("kron: associativity is entrywise exact on exact inputs") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    auto small_int = [&](std::size_t r, std::size_t c) {
      CMatrix m(r, c);
      for (std::size_t i = 0; i < m.size(); ++i)
        m.data()[i] = cx(double(int(rng.next_u64() % 5)) - 2.0,
                         double(int(rng.next_u64() % 5)) - 2.0);
      return m;
    };
    const CMatrix a = small_int(2, 3), b = small_int(3, 2), c = small_int(2, 2);
    CHECK(max_abs_diff(kern::kron(kern::kron(a, b), c), kern::kron(a, kern::kron(b, c))) == 0.0);
  }
}

TEST_CASE("kron: dimension limit") {
  const CMatrix big(70, 70);
  CHECK_THROWS_AS(static_cast<void>(kern::kron(big, big)), Error);
  try {
    static_cast<void>(kern::kron(big, big));
  } catch (const Error& e) {
    CHECK(e.code() == errc::dimension_limit);
  }
}

TEST_CASE("partial_trace: maximally entangled and product cases") {
  CMatrix omega_vec(4, 1, {1.0, 0.0, 0.0, 1.0});
  CMatrix ent = projector(omega_vec);
  ent *= 0.5;
  CHECK(max_abs_diff(kern::partial_trace(ent, 2, 2, Factor::first),
                     cx(0.5) * CMatrix::identity(2)) <= 1e-15);
  CHECK(max_abs_diff(kern::partial_trace(ent, 2, 2, Factor::second),
                     cx(0.5) * CMatrix::identity(2)) <= 1e-15);

  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    CMatrix a = gaussian_matrix(3, 3, rng);
    CMatrix b = gaussian_matrix(3, 3, rng);
    a *= cx(0.2);  // keep entries at magnitude <= 1
    b *= cx(0.2);
    const CMatrix m = kern::kron(a, b);
    CHECK(max_abs_diff(kern::partial_trace(m, 3, 3, Factor::first), trace(b) * a) <= 1e-12);
    CHECK(max_abs_diff(kern::partial_trace(m, 3, 3, Factor::second), trace(a) * b) <= 1e-12);
    CHECK(std::abs(trace(kern::partial_trace(m, 3, 3, Factor::first)) - trace(m)) <= 1e-13);
  }
}

TEST_CASE("partial_trace: identity-channel coupling of diag(0.7,0.3)") {
  // Expand |sqrt(rho)>><<sqrt(rho)| entrywise: vec = (sqrt(.7),0,0,sqrt(.3)).
  CMatrix v(4, 1, {std::sqrt(0.7), 0.0, 0.0, std::sqrt(0.3)});
  const CMatrix pi = projector(v);
  const CMatrix want = CMatrix::diag_real({0.7, 0.3});
  CHECK(max_abs_diff(kern::partial_trace(pi, 2, 2, Factor::second), want) <= 1e-15);
  CHECK(max_abs_diff(kern::partial_trace(pi, 2, 2, Factor::first), want) <= 1e-15);
}

TEST_CASE("partial_trace: dimension mismatch") {
  CHECK_THROWS_AS(static_cast<void>(kern::partial_trace(CMatrix::identity(6), 2, 2, Factor::first)),
                  Error);
}

TEST_CASE("herm_eig: frozen examples") {
  const SpectralDecomposition sd = herm_eig(CMatrix::diag_real({3.0, 1.0, 2.0}));
  REQUIRE(sd.eigenvalues.size() == 3);
  CHECK(sd.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(sd.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sd.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-14));
  // Eigenvectors are the standard basis, permuted.
  CHECK(std::abs(sd.eigenvectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(sd.eigenvectors(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(sd.eigenvectors(1, 2)) == doctest::Approx(1.0));

  const SpectralDecomposition sx = herm_eig(pauli_x());
  CHECK(sx.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sx.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(sx.eigenvectors(0, 0)) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(std::abs(sx.eigenvectors(1, 0)) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
}

TEST_CASE("herm_eig: reconstruction and orthonormality oracle") {
  Rng rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const CMatrix h = random_hermitian(5, rng);
    const SpectralDecomposition sd = herm_eig(h);

    // Descending order.
    for (std::size_t i = 1; i < sd.eigenvalues.size(); ++i)
      CHECK(sd.eigenvalues[i - 1] >= sd.eigenvalues[i]);

    // Gram deviation.
    const CMatrix gram = kern::matmul(kern::dagger(sd.eigenvectors), sd.eigenvectors);
    CHECK(max_abs_diff(gram, CMatrix::identity(5)) <= 1e-12);

    // Reconstruction V diag(lambda) V^dagger within 1e-11 relative Frobenius.
    const CMatrix rebuilt = kern::matmul(
        kern::matmul(sd.eigenvectors, CMatrix::diag_real(sd.eigenvalues)),
        kern::dagger(sd.eigenvectors));
    CHECK(frobenius_norm(rebuilt - h) <= 1e-11 * frobenius_norm(h));
  }
}

TEST_CASE("herm_eig: rejects non-Hermitian input") {
  CMatrix m(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(static_cast<void>(herm_eig(m)), Error);
  try {
    static_cast<void>(herm_eig(m));
  } catch (const Error& e) {
    CHECK(e.code() == errc::not_hermitian);
  }
}

TEST_CASE("psd_sqrt: frozen examples and square property") {
  CHECK(max_abs_diff(psd_sqrt(CMatrix::diag_real({4.0, 9.0})), CMatrix::diag_real({2.0, 3.0})) <=
        1e-14);
  CHECK(max_abs_diff(psd_sqrt(CMatrix::identity(5)), CMatrix::identity(5)) <= 1e-14);

  Rng rng(23);
  const CMatrix psi = random_unit_vector(4, rng);
  const CMatrix proj = projector(psi);
  CHECK(max_abs_diff(psd_sqrt(proj), proj) <= 1e-12);

  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t d = 2 + rep % 5;  // up to 6
    const CMatrix p = random_psd(d, d, rng);
    const CMatrix s = psd_sqrt(p);
    CHECK(frobenius_norm(kern::matmul(s, s) - p) <= 1e-10 * frobenius_norm(p));
  }

  CHECK_THROWS_AS(static_cast<void>(psd_sqrt(CMatrix::diag_real({1.0, -1.0}))), Error);
}

TEST_CASE("pinv_sqrt: kernel handling and projector oracle") {
  CHECK(max_abs_diff(pinv_sqrt(CMatrix::diag_real({4.0, 0.0})), CMatrix::diag_real({0.5, 0.0})) <=
        1e-14);
  CHECK(max_abs_diff(pinv_sqrt(CMatrix::identity(3)), CMatrix::identity(3)) <= 1e-14);
  CHECK(max_abs(pinv_sqrt(CMatrix(4, 4))) == 0.0);

  Rng rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = 3 + rep % 3;
    const std::size_t rank = 1 + rep % (d - 1);
    const CMatrix p = random_psd(d, rank, rng);
    const CMatrix q = pinv_sqrt(p);

    // Independent support projector from the eigenvectors of p.
    const SpectralDecomposition sd = herm_eig(p);
    const double cut = default_rank_tol(d) * sd.eigenvalues[0];
    CMatrix support(d, d);
    for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
      if (sd.eigenvalues[k] <= cut) continue;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          support(i, j) += sd.eigenvectors(i, k) * std::conj(sd.eigenvectors(j, k));
    }
    CHECK(max_abs_diff(kern::matmul(kern::matmul(q, p), q), support) <= 1e-9);
    // pinv_sqrt(p)^2 is the pseudo-inverse: q^2 p is the support projector
    // and the Moore-Penrose sandwich p q^2 p restores p.
    CHECK(max_abs_diff(kern::matmul(kern::matmul(q, q), p), support) <= 1e-9);
    CHECK(max_abs_diff(kern::matmul(p, kern::matmul(kern::matmul(q, q), p)), p) <= 1e-9);
  }
}

TEST_CASE("trace_norm: values and Hermitian cross-check") {
  CHECK(trace_norm(CMatrix::diag_real({1.0, -2.0})) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(trace_norm(CMatrix::diag_real({0.25, 0.25, 0.5})) == doctest::Approx(1.0));
  CHECK(trace_norm(CMatrix(3, 3)) == 0.0);

  Rng rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    const CMatrix h = random_hermitian(4, rng);
    const SpectralDecomposition sd = herm_eig(h);
    double sum_abs = 0.0;
    for (double l : sd.eigenvalues) sum_abs += std::abs(l);
    CHECK(trace_norm(h) == doctest::Approx(sum_abs).epsilon(1e-10));
  }
}

TEST_CASE("trace_norm: norm axioms on random triples") {
  Rng rng(43);
  for (int rep = 0; rep < 20; ++rep) {
    const CMatrix a = gaussian_matrix(4, 4, rng);
    const CMatrix b = gaussian_matrix(4, 4, rng);
    const double s = 2.0 * rng.next_double() - 1.0;
    CHECK(trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-10);
    CHECK(trace_norm(cx(s) * a) == doctest::Approx(std::abs(s) * trace_norm(a)).epsilon(1e-10));
  }
}

TEST_CASE("hs_inner: frozen values and conjugate symmetry") {
  CHECK(hs_inner(CMatrix::identity(2), CMatrix::identity(2)) == cx(2.0, 0.0));
  CHECK(std::abs(hs_inner(pauli_x(), pauli_z())) == 0.0);

  const double s = std::sqrt(0.5);
  const CMatrix sqrt_rho = CMatrix::diag_real({s, s});
  CHECK(std::abs(hs_inner(sqrt_rho, kern::matmul(pauli_z(), sqrt_rho))) <= 1e-15);

  Rng rng(47);
  const CMatrix a = gaussian_matrix(3, 3, rng);
  const CMatrix b = gaussian_matrix(3, 3, rng);
  CHECK(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))) <= 1e-13);

  CHECK_THROWS_AS(static_cast<void>(hs_inner(CMatrix(2, 2), CMatrix(3, 3))), Error);
}
