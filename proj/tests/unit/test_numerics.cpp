#include <doctest.h>

#include <cmath>
#include <random>

#include "anormal/numerics.hpp"
#include "oracles.hpp"

using namespace anormal;

namespace {

ComplexMatrix diag(std::initializer_list<double> d) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

double max_entry_error(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("tolerance validation and zones") {
  Tolerance tol;
  CHECK_NOTHROW(tol.validate());
  CHECK(tol.classify(1e-10) == Verdict::pass);
  CHECK(tol.classify(1e-8) == Verdict::indeterminate);
  CHECK(tol.classify(1e-3) == Verdict::fail);

  Tolerance bad = tol;
  bad.residual_tol = 1e-5;  // above the margin
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = tol;
  bad.rank_cutoff = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = tol;
  bad.rank_cutoff = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("all_of") {
  CHECK(all_of({Verdict::pass, Verdict::pass}) == Verdict::pass);
  CHECK(all_of({Verdict::pass, Verdict::indeterminate}) == Verdict::indeterminate);
  CHECK(all_of({Verdict::indeterminate, Verdict::fail}) == Verdict::fail);
  CHECK(all_of({}) == Verdict::pass);
}

TEST_CASE("pseudo_inverse examples") {
  const Tolerance tol;
  CHECK(max_entry_error(pseudo_inverse(identity(2), tol), identity(2)) < 1e-15);
  CHECK(max_entry_error(pseudo_inverse(diag({1, 2}), tol), diag({1, 0.5})) < 1e-15);

  std::mt19937_64 rng(11);
  const ComplexMatrix m = oracle::random_rank(rng, 4, 3, 2);
  const auto p = oracle::penrose(m, pseudo_inverse(m, tol));
  CHECK(p.worst() < 1e-10);
  CHECK(numerical_rank(m, tol) == 2);
}

TEST_CASE("pseudo_inverse rejects non-finite input") {
  ComplexMatrix m = identity(2);
  m(0, 1) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(pseudo_inverse(m, Tolerance{}), Error);
}

TEST_CASE("Penrose identities on random shapes and ranks") {
  const Tolerance tol;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 16);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = dim(rng);
    const int c = dim(rng);
    std::uniform_int_distribution<int> rk(1, std::min(r, c));
    const ComplexMatrix m = oracle::random_rank(rng, r, c, rk(rng));
    const ComplexMatrix x = pseudo_inverse(m, tol);
    CHECK(oracle::penrose(m, x).worst() < 1e-10);
    // (M^+)^+ = M
    CHECK(oracle::norm2(pseudo_inverse(x, tol) - m) / oracle::norm2(m) < 1e-9);
  }
}

TEST_CASE("projector examples") {
  const Tolerance tol;
  CHECK(max_entry_error(orthogonal_projector_onto_range(diag({1, 2}), tol),
                        identity(2)) < 1e-14);
  CHECK(max_entry_error(orthogonal_projector_onto_range(diag({1, 0}), tol),
                        diag({1, 0})) < 1e-14);

  std::mt19937_64 rng(3);
  const ComplexVector v = oracle::random_matrix(rng, 4, 1).col(0);
  const ComplexMatrix a = v * v.adjoint();
  const ComplexMatrix expected = a / v.squaredNorm();
  CHECK(oracle::norm2(orthogonal_projector_onto_range(a, tol) - expected) < 1e-10);
}

TEST_CASE("projector properties") {
  const Tolerance tol;
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    const int r = 1 + trial % n;
    const ComplexMatrix m = oracle::random_rank(rng, n, n, r);
    const ComplexMatrix p = orthogonal_projector_onto_range(m, tol);
    CHECK(oracle::norm2(p * p - p) < 1e-9);
    CHECK(oracle::norm2(p - p.adjoint()) < 1e-9);
    CHECK(oracle::norm2(p * m - m) / oracle::norm2(m) < 1e-9);
    CHECK(numerical_rank(p, tol) == r);
  }
}

TEST_CASE("psd_sqrt examples") {
  const Tolerance tol;
  CHECK(max_entry_error(psd_sqrt(diag({4, 9}), tol), diag({2, 3})) < 1e-14);
  CHECK(psd_sqrt(ComplexMatrix::Zero(3, 3), tol).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(21);
  const ComplexMatrix q = oracle::random_unitary(rng, 2);
  const ComplexMatrix m = q * diag({1, 2}) * q.adjoint();
  const ComplexMatrix r = psd_sqrt(m, tol);
  CHECK(oracle::norm2(r * r - m) / oracle::norm2(m) < 1e-9);
  CHECK(oracle::norm2(r - q * diag({1, std::sqrt(2.0)}) * q.adjoint()) < 1e-12);
}

TEST_CASE("psd_sqrt on non-Hermitian input with positive spectrum") {
  const Tolerance tol;
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 5;
    ComplexMatrix g = oracle::random_matrix(rng, n, n);
    g += 3.0 * identity(n);  // keep the similarity well conditioned
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = 0.5 + i;
    const ComplexMatrix m = g * d.cast<Complex>().asDiagonal() * g.inverse();
    const ComplexMatrix r = psd_sqrt(m, tol);
    CHECK(oracle::norm2(r * r - m) / oracle::norm2(m) < 1e-9);
  }
}

TEST_CASE("psd_sqrt rejects negative or complex spectrum") {
  const Tolerance tol;
  try {
    (void)psd_sqrt(diag({1, -1}), tol);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::spectrum_negative);
  }
  ComplexMatrix rot(2, 2);
  rot << 0, -1, 1, 0;  // eigenvalues +-i
  CHECK_THROWS_AS(psd_sqrt(rot, tol), Error);
}

TEST_CASE("commutator") {
  CHECK(commutator(diag({1, 2}), diag({3, 4})).cwiseAbs().maxCoeff() == 0.0);
  std::mt19937_64 rng(1);
  const ComplexMatrix m = oracle::random_matrix(rng, 5, 5);
  CHECK(oracle::norm2(commutator(m, m)) < 1e-13 * oracle::norm2(m) * oracle::norm2(m));
  CHECK_THROWS_AS(commutator(identity(2), identity(3)), Error);
}

TEST_CASE("matrix_power") {
  ComplexMatrix t(2, 2);
  t << 2, 0, 1, -2;
  CHECK(max_entry_error(matrix_power(t, 2), 4.0 * identity(2)) == 0.0);
  CHECK(max_entry_error(matrix_power(t, 0), identity(2)) == 0.0);
  std::mt19937_64 rng(2);
  const ComplexMatrix m = oracle::random_matrix(rng, 4, 4);
  ComplexMatrix naive = identity(4);
  for (int k = 0; k < 7; ++k) naive = naive * m;
  CHECK(oracle::norm2(matrix_power(m, 7) - naive) / oracle::norm2(naive) < 1e-13);
}

TEST_CASE("rank verdicts") {
  const Tolerance tol;
  CHECK(full_rank_verdict(diag({1, 2}), tol) == Verdict::pass);
  CHECK(full_rank_verdict(diag({1, 0}), tol) == Verdict::fail);
  CHECK(full_rank_verdict(diag({1, 1e-8}), tol) == Verdict::indeterminate);
  CHECK(rank_equals_verdict(diag({1, 0, 2}), 2, tol) == Verdict::pass);
  CHECK(rank_equals_verdict(diag({1, 0, 2}), 3, tol) == Verdict::fail);
}

TEST_CASE("scaled_residual of zero is zero") {
  CHECK(scaled_residual(ComplexMatrix::Zero(2, 2), 0.0) == 0.0);
  CHECK(scaled_residual(identity(2), 2.0) == doctest::Approx(0.5));
}

}  // TEST_SUITE
