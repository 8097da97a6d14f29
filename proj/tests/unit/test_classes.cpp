#include <doctest.h>

#include <cmath>
#include <random>

#include "anormal/classes.hpp"
#include "anormal/lab.hpp"
#include "oracles.hpp"

using namespace anormal;

namespace {

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

BoundOperator example() {
  return a_adjoint(make_context(mat2(1, 0, 0, 2)), mat2(2, 0, 1, -2));
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, int n) {
  const ComplexMatrix g = oracle::random_matrix(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

double max_entry_error(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

// Members of the (n,m) classes manufactured by the generators.
std::vector<lab::DenseInstance> class_members(std::uint64_t seed, int count) {
  std::vector<lab::DenseInstance> out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(2, 5);
  for (int i = 0; i < count; ++i) {
    lab::GeneratorSpec spec;
    spec.dim = dim(rng);
    spec.metric_rank = 1 + static_cast<int>(rng() % static_cast<unsigned>(spec.dim));
    spec.seed = rng();
    if (i % 2 == 0) {
      spec.family = lab::Family::scalar_power;
      spec.metric_rank = spec.dim;
      spec.power = 1 + i % 4;
      spec.unimodular = true;
    } else {
      spec.family = lab::Family::a_normal;
    }
    out.push_back(lab::generate_dense(spec));
  }
  return out;
}

}  // namespace

TEST_SUITE("classes") {

TEST_CASE("index validation") {
  CHECK_NOTHROW((ClassIndex{1, 8}.validate()));
  CHECK_THROWS_AS((ClassIndex{0, 1}.validate()), Error);
  CHECK_THROWS_AS((ClassIndex{1, 9}.validate()), Error);
  CHECK_NOTHROW((ClassIndex{12, 1}.validate(16)));
  try {
    (void)nm_normal_residual(example(), {9, 1});
    FAIL("expected index_out_of_range");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::index_out_of_range);
  }
}

TEST_CASE("(n,m)-A-normal examples") {
  const auto t = example();
  const auto one = nm_normal_residual(t, {1, 1});
  CHECK(one.verdict == Verdict::fail);
  CHECK(one.residual >= 1e-3);
  const auto two = nm_normal_residual(t, {2, 1});
  CHECK(two.verdict == Verdict::pass);
  CHECK(two.residual <= 1e-12);
  CHECK(two.predicate == "nm_normal");
  CHECK(two.index == ClassIndex{2, 1});

  // The commutator of the example itself is nonzero and that of T^2 vanishes.
  CHECK(oracle::norm2(commutator(t.op(), t.sharp())) > 1.0);
  CHECK(oracle::norm2(commutator(t.op() * t.op(), t.sharp())) < 1e-12);

  std::mt19937_64 rng(1);
  const auto id = make_context(identity(4));
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = a_adjoint(id, random_hermitian(rng, 4));
    for (int n = 1; n <= 3; ++n) {
      for (int m = 1; m <= 3; ++m) {
        CHECK(nm_normal_residual(h, {n, m}).verdict == Verdict::pass);
      }
    }
  }
}

TEST_CASE("(n,m)-A-quasinormal examples") {
  CHECK(nm_quasinormal_residual(example(), {2, 1}).verdict == Verdict::pass);

  const auto nil = a_adjoint(make_context(identity(2)), mat2(0, 1, 0, 0));
  const auto v = nm_quasinormal_residual(nil, {2, 1});
  CHECK(v.verdict == Verdict::pass);
  CHECK(v.residual == 0.0);

  for (const auto& inst : class_members(3, 40)) {
    for (int n = 1; n <= 3; ++n) {
      for (int m = 1; m <= 3; ++m) {
        if (nm_normal_residual(inst.t, {n, m}).verdict == Verdict::pass) {
          CHECK(nm_quasinormal_residual(inst.t, {n, m}).verdict == Verdict::pass);
        }
      }
    }
  }
}

TEST_CASE("basic class predicates") {
  std::mt19937_64 rng(2);
  const ComplexMatrix a = oracle::random_psd(rng, 3, 2);
  const auto ctx = make_context(a);
  const auto preds = basic_class_predicates(a_adjoint(ctx, identity(3)));
  REQUIRE(preds.size() == 4);
  CHECK(preds[0].predicate == "a_normal");
  CHECK(preds[1].predicate == "a_selfadjoint");
  CHECK(preds[2].predicate == "a_isometry");
  CHECK(preds[3].predicate == "a_unitary");
  CHECK(preds[2].verdict == Verdict::pass);

  CHECK(a_normal_verdict(example()).verdict == Verdict::fail);

  ComplexMatrix u = ComplexMatrix::Zero(3, 3);
  u(0, 0) = std::polar(1.0, 0.3);
  u(1, 1) = std::polar(1.0, -1.2);
  u(2, 2) = -1.0;
  const auto unitary = a_adjoint(make_context(identity(3)), u);
  CHECK(a_unitary_verdict(unitary).verdict == Verdict::pass);
  CHECK(a_selfadjoint_verdict(unitary).verdict == Verdict::fail);

  const auto herm = a_adjoint(make_context(identity(3)), random_hermitian(rng, 3));
  CHECK(a_selfadjoint_verdict(herm).verdict == Verdict::pass);
  CHECK(a_normal_verdict(herm).verdict == Verdict::pass);
}

TEST_CASE("X, Y and Z") {
  const auto xyz = build_xyz(example(), {2, 1});
  CHECK(max_entry_error(xyz.x, mat2(6, 2, 0, 2)) < 1e-12);
  CHECK(max_entry_error(xyz.y, mat2(2, -2, 0, 6)) < 1e-12);

  std::mt19937_64 rng(4);
  const ComplexMatrix h = random_hermitian(rng, 3);
  const auto z = build_xyz(a_adjoint(make_context(identity(3)), h), {1, 1}).z;
  CHECK(oracle::norm2(z - h * h) < 1e-13 * oracle::norm2(h * h));

  // [X,Y] = 2 [(T#)^m, T^n]: vanishes exactly when the class commutator does.
  for (const auto& inst : class_members(9, 20)) {
    const auto d = build_xyz(inst.t, {2, 3});
    const ComplexMatrix tn = matrix_power(inst.t.op(), 2);
    const ComplexMatrix sm = sharp_power(inst.t, 3);
    CHECK(oracle::norm2(commutator(d.x, d.y) - 2.0 * commutator(sm, tn)) <
          1e-12 * (1.0 + oracle::norm2(tn) * oracle::norm2(sm)));
  }
}

TEST_CASE("C and B operators") {
  std::mt19937_64 rng(7);
  const auto id = make_context(identity(3));
  const ComplexMatrix x = oracle::random_matrix(rng, 3, 3);
  const auto t = a_adjoint(id, x);
  // |T| and |T^*| through an independent SVD.
  Eigen::JacobiSVD<ComplexMatrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const ComplexMatrix sig = svd.singularValues().cast<Complex>().asDiagonal();
  const ComplexMatrix modulus = svd.matrixV() * sig * svd.matrixV().adjoint();
  const ComplexMatrix co_modulus = svd.matrixU() * sig * svd.matrixU().adjoint();
  CHECK(oracle::norm2(c_operator(t, 1) - modulus) < 1e-10);
  CHECK(oracle::norm2(b_operator(t, 1) - co_modulus) < 1e-10);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 3.0;
  const auto diag = a_adjoint(make_context(identity(2)), d);
  ComplexMatrix d49 = ComplexMatrix::Zero(2, 2);
  d49(0, 0) = 4.0;
  d49(1, 1) = 9.0;
  CHECK(max_entry_error(c_operator(diag, 2), d49) < 1e-12);
  CHECK(max_entry_error(b_operator(diag, 2), d49) < 1e-12);

  const auto ex = example();
  const ComplexMatrix st = ex.sharp() * ex.op();
  const ComplexMatrix c = c_operator(ex, 1);
  CHECK(oracle::norm2(c * c - st) / oracle::norm2(st) < 1e-9);
  const ComplexMatrix ts = ex.op() * ex.sharp();
  const ComplexMatrix b = b_operator(ex, 1);
  CHECK(oracle::norm2(b * b - ts) / oracle::norm2(ts) < 1e-9);
}

TEST_CASE("sharp_power is a power of the adjoint") {
  std::mt19937_64 rng(19);
  const ComplexMatrix a = oracle::random_psd(rng, 4, 2);
  const auto t = a_adjoint(make_context(a), oracle::random_in_ba(rng, a, 2));
  ComplexMatrix naive = identity(4);
  for (int k = 0; k < 3; ++k) naive = naive * t.sharp();
  CHECK(oracle::norm2(sharp_power(t, 3) - naive) < 1e-12 * (1.0 + oracle::norm2(naive)));
}

TEST_CASE("index closure on class members") {
  for (const auto& inst : class_members(21, 60)) {
    for (int n = 1; n <= 3; ++n) {
      for (int m = 1; m <= 3; ++m) {
        if (nm_normal_residual(inst.t, {n, m}).verdict != Verdict::pass) continue;
        CHECK(nm_normal_residual(inst.t, {2 * n, m}).verdict == Verdict::pass);
        CHECK(nm_normal_residual(inst.t, {n, 2 * m}).verdict == Verdict::pass);
        CHECK(nm_normal_residual(inst.t, {2 * n, 2 * m}).verdict == Verdict::pass);
      }
    }
    for (int k = 1; k <= 4; ++k) {
      if (nm_normal_residual(inst.t, {1, k}).verdict == Verdict::pass) {
        for (int n = 1; n <= 4; ++n) {
          CHECK(nm_normal_residual(inst.t, {n, k}).verdict == Verdict::pass);
        }
      }
      if (nm_normal_residual(inst.t, {k, 1}).verdict == Verdict::pass) {
        for (int m = 1; m <= 4; ++m) {
          CHECK(nm_normal_residual(inst.t, {k, m}).verdict == Verdict::pass);
        }
      }
    }
  }
}

TEST_CASE("squared identities on class members") {
  for (const auto& inst : class_members(33, 60)) {
    const auto& t = inst.t;
    const double nt = oracle::norm2(t.op());
    // A T# below 1e-6 |A^+| |T| |A| is indistinguishable from zero.
    const ComplexMatrix& a = t.context().metric();
    const double ns = std::max(
        oracle::norm2(t.sharp()),
        1e-6 * oracle::norm2(t.context().dagger()) * nt * oracle::norm2(a));
    for (int n = 1; n <= 3; ++n) {
      for (int m = 1; m <= 3; ++m) {
        const ComplexMatrix tn = matrix_power(t.op(), n);
        const ComplexMatrix sm = sharp_power(t, m);
        const double scale = std::pow(nt, 2 * n) * std::pow(ns, 2 * m);
        if (nm_normal_residual(t, {n, m}).verdict == Verdict::pass) {
          const ComplexMatrix lhs = matrix_power(t.op(), 2 * n) * sharp_power(t, 2 * m);
          CHECK(oracle::norm2(lhs - (tn * sm) * (tn * sm)) / scale <= 1e-9);
        }
        if (nm_quasinormal_residual(t, {n, m}).verdict == Verdict::pass) {
          const ComplexMatrix lhs = sharp_power(t, 2 * m) * matrix_power(t.op(), 2 * n);
          CHECK(oracle::norm2(lhs - (sm * tn) * (sm * tn)) / scale <= 1e-9);
        }
      }
    }
  }
}

}  // TEST_SUITE
