#include <doctest.h>

#include <random>

#include "anormal/semihilbert.hpp"
#include "anormal/shift.hpp"
#include "oracles.hpp"

using namespace anormal;
using namespace anormal::shift;

namespace {

WeightedShiftInstance constant_shift(GaussianRational w, Rational a) {
  WeightedShiftInstance s;
  s.weights.period = {std::move(w)};
  s.metric.period = {std::move(a)};
  return s;
}

// Random instance whose values are small dyadic rationals, so that the
// floating-point finite section is computed without rounding.
WeightedShiftInstance random_dyadic(std::mt19937_64& rng) {
  const std::vector<Rational> metric_values = {Rational(0), Rational(1, 2),
                                               Rational(1), Rational(2),
                                               Rational(4)};
  const std::vector<GaussianRational> weight_values = {
      GaussianRational(0),
      GaussianRational(1),
      GaussianRational(-1),
      GaussianRational(Rational(1, 2)),
      GaussianRational(Rational(0), Rational(1)),
      GaussianRational(Rational(2), Rational(-1)),
      GaussianRational(2)};
  auto pick = [&](const auto& v) { return v[rng() % v.size()]; };
  for (;;) {
    WeightedShiftInstance s;
    const auto pre_w = rng() % 3;
    const auto per_w = 1 + rng() % 3;
    const auto pre_a = rng() % 3;
    const auto per_a = 1 + rng() % 2;
    // Bias towards structured data: half the time constant weights.
    const bool constant = rng() % 2 == 0;
    const GaussianRational c = pick(weight_values);
    for (std::size_t i = 0; i < pre_w; ++i) s.weights.preperiod.push_back(pick(weight_values));
    for (std::size_t i = 0; i < per_w; ++i) {
      s.weights.period.push_back(constant ? c : pick(weight_values));
    }
    for (std::size_t i = 0; i < pre_a; ++i) s.metric.preperiod.push_back(pick(metric_values));
    for (std::size_t i = 0; i < per_a; ++i) {
      s.metric.period.push_back(rng() % 3 == 0 ? pick(metric_values) : Rational(1));
    }
    try {
      s.validate();
      return s;
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST_SUITE("shift") {

TEST_CASE("gaussian rational arithmetic") {
  const GaussianRational a(Rational(1, 2), Rational(3));
  const GaussianRational b(Rational(-2), Rational(1, 3));
  CHECK((a * b) / b == a);
  CHECK((a + b) - b == a);
  CHECK(a.conj().conj() == a);
  CHECK(a.norm2() == Rational(37, 4));
  CHECK(GaussianRational(Rational(3, 4), Rational(-1)).str() == "3/4-1i");
  CHECK(GaussianRational(Rational(2)).str() == "2");
  CHECK_THROWS_AS(a / GaussianRational(0), Error);
  CHECK(parse_rational(6, -4) == Rational(-3, 2));
  CHECK_THROWS_AS(parse_rational(1, 0), Error);
}

TEST_CASE("eventually periodic sequences") {
  MetricSequence seq;
  seq.preperiod = {Rational(5)};
  seq.period = {Rational(1), Rational(2)};
  CHECK(seq.at(1) == 5);
  CHECK(seq.at(2) == 1);
  CHECK(seq.at(3) == 2);
  CHECK(seq.at(4) == 1);
  CHECK(seq.at(1001) == 2);
  CHECK_THROWS_AS(seq.at(0), Error);
  MetricSequence empty;
  empty.preperiod = {Rational(1)};
  CHECK_THROWS_AS(empty.at(2), Error);
}

TEST_CASE("instance validation") {
  auto s = unilateral_shift();
  CHECK_NOTHROW(s.validate());
  CHECK(s.squared_a_bound() == 1);

  WeightedShiftInstance bad = s;
  bad.metric.preperiod = {Rational(0)};  // a_1 = 0, w_1 = 1, a_2 = 1
  try {
    bad.validate();
    FAIL("expected not_in_b_a");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_in_b_a);
  }
  WeightedShiftInstance neg = s;
  neg.metric.period = {Rational(-1)};
  CHECK_THROWS_AS(neg.validate(), Error);
  WeightedShiftInstance none;
  CHECK_THROWS_AS(none.validate(), Error);

  const auto weighted = constant_shift(GaussianRational(Rational(1), Rational(1)), 3);
  CHECK(weighted.squared_a_bound() == 2);
}

TEST_CASE("A-adjoint weights") {
  const auto unit = shift_a_adjoint(unilateral_shift());
  CHECK(unit.at(1).is_zero());
  for (int k = 2; k < 20; ++k) CHECK(unit.at(k) == GaussianRational(1));

  const auto two = shift_a_adjoint(constant_shift(GaussianRational(2), 1));
  CHECK(two.at(1).is_zero());
  for (int k = 2; k < 20; ++k) CHECK(two.at(k) == GaussianRational(2));

  WeightedShiftInstance alt = unilateral_shift();
  alt.metric.period = {Rational(1), Rational(2)};
  const auto v = shift_a_adjoint(alt);
  CHECK(v.at(2) == GaussianRational(2));
  CHECK(v.at(3) == GaussianRational(Rational(1, 2)));
  CHECK(v.at(4) == GaussianRational(2));

  // Against the dense A-adjoint of a 12 x 12 section.
  const auto f = finite_section(alt, 12);
  const auto dense = a_adjoint(make_context(f.a), f.t);
  for (int k = 2; k <= 12; ++k) {
    CHECK(std::abs(dense.sharp()(k - 2, k - 1) - v.at(k).to_complex()) < 1e-15);
  }
}

TEST_CASE("unilateral shift classes") {
  const auto s = unilateral_shift();
  const auto normal = shift_class_check(s, {2, 1}, ShiftClass::normal);
  CHECK_FALSE(normal.passed);
  REQUIRE(normal.witness_k.has_value());
  CHECK(*normal.witness_k == 1);
  CHECK_FALSE(normal.lhs == normal.rhs);

  const auto quasi = shift_class_check(s, {2, 1}, ShiftClass::quasinormal);
  CHECK(quasi.passed);
  CHECK_FALSE(quasi.witness_k.has_value());
  CHECK(quasi.window == decision_window(s, {2, 1}));
}

TEST_CASE("zero shift is in every class") {
  const auto z = constant_shift(GaussianRational(0), 1);
  for (int n = 1; n <= 4; ++n) {
    for (int m = 1; m <= 4; ++m) {
      CHECK(shift_class_check(z, {n, m}, ShiftClass::normal).passed);
      CHECK(shift_class_check(z, {n, m}, ShiftClass::quasinormal).passed);
    }
  }
}

TEST_CASE("coefficients are periodic past the preperiod") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = random_dyadic(rng);
    const auto v = shift_a_adjoint(s);
    const std::int64_t p = s.period();
    for (int n = 1; n <= 3; ++n) {
      for (int m = 1; m <= 3; ++m) {
        for (auto which : {ShiftClass::normal, ShiftClass::quasinormal}) {
          for (std::int64_t k = s.preperiod() + m + 2; k <= s.preperiod() + m + 2 + 3 * p; ++k) {
            const auto c0 = shift_class_coefficients(s, v, {n, m}, which, k);
            const auto c1 = shift_class_coefficients(s, v, {n, m}, which, k + p);
            CHECK(c0.lhs == c1.lhs);
            CHECK(c0.rhs == c1.rhs);
            CHECK(c1.target_index - c0.target_index == p);
          }
        }
      }
    }
  }
}

TEST_CASE("exact verdicts agree with exact sections") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = random_dyadic(rng);
    for (int n = 1; n <= 3; ++n) {
      for (int m = 1; m <= 3; ++m) {
        for (auto which : {ShiftClass::normal, ShiftClass::quasinormal}) {
          const bool quasi = which == ShiftClass::quasinormal;
          const auto verdict = shift_class_check(s, {n, m}, which);
          // Columns far enough from the truncation edge are exact.
          const auto window = static_cast<std::size_t>(verdict.window);
          const std::size_t size = window + static_cast<std::size_t>(n + m + 3);
          const auto t = oracle::exact_shift_section(s, size);
          const auto a = oracle::exact_metric_section(s, size);
          const auto comm = oracle::exact_class_commutator(t, a, n, m, quasi);
          const long first = oracle::first_nonzero_column(comm, window);
          CHECK(verdict.passed == (first < 0));
          if (!verdict.passed) {
            REQUIRE(verdict.witness_k.has_value());
            CHECK(*verdict.witness_k == first + 1);
          }
        }
      }
    }
  }
}

TEST_CASE("floating finite sections match exact verdicts on dyadic data") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = random_dyadic(rng);
    for (int n = 1; n <= 3; ++n) {
      for (int m = 1; m <= 3; ++m) {
        for (auto which : {ShiftClass::normal, ShiftClass::quasinormal}) {
          const bool quasi = which == ShiftClass::quasinormal;
          const auto verdict = shift_class_check(s, {n, m}, which);
          const auto window = verdict.window;
          for (std::int64_t extra : {std::int64_t{0}, std::int64_t{5}}) {
            const std::int64_t size = window + n + m + 3 + extra;
            const auto f = finite_section(s, size);
            const auto t = a_adjoint(make_context(f.a), f.t);
            ComplexMatrix rhs = matrix_power(t.sharp(), m);
            if (quasi) rhs = rhs * t.op();
            const ComplexMatrix tn = matrix_power(t.op(), n);
            const ComplexMatrix comm = tn * rhs - rhs * tn;
            const double interior = comm.leftCols(window).cwiseAbs().maxCoeff();
            CHECK((interior == 0.0) == verdict.passed);
          }
        }
      }
    }
  }
}

TEST_CASE("truncation breaks the example at the boundary") {
  // The section is not the shift: the last column spoils quasinormality.
  const auto f = finite_section(unilateral_shift(), 8);
  const auto t = a_adjoint(make_context(f.a), f.t);
  const auto v = nm_quasinormal_residual(t, {2, 1});
  CHECK(v.verdict == Verdict::fail);
}

TEST_CASE("finite section shape") {
  const auto f = finite_section(unilateral_shift(), 4);
  CHECK(f.t.rows() == 4);
  CHECK(f.t(1, 0) == Complex(1.0, 0.0));
  CHECK(f.t(0, 3) == Complex(0.0, 0.0));
  CHECK(f.a == identity(4));
  CHECK_THROWS_AS(finite_section(unilateral_shift(), 0), Error);
}

}  // TEST_SUITE
