#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "anormal/classes.hpp"
#include "anormal/error.hpp"

namespace anormal::shift {

using Rational = boost::multiprecision::cpp_rational;

/// Exact complex rational re + i im.
struct GaussianRational {
  Rational re{0};
  Rational im{0};

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT implicit
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long long r) : re(r) {}  // NOLINT implicit

  bool is_zero() const { return re == 0 && im == 0; }
  GaussianRational conj() const { return {re, -im}; }
  Rational norm2() const { return re * re + im * im; }

  friend GaussianRational operator+(const GaussianRational& a,
                                    const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a,
                                    const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a,
                                    const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a,
                                    const GaussianRational& b);
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  std::string str() const;
  std::complex<double> to_complex() const;
};

/// v_1, v_2, ...: the preperiod followed by the period repeated forever.
/// Indices are 1-based.
template <typename V>
struct EventuallyPeriodicSequence {
  std::vector<V> preperiod;
  std::vector<V> period;

  const V& at(std::int64_t k) const {
    if (k < 1) throw Error(ErrorCode::invalid_input, "sequence index < 1");
    const auto pre = static_cast<std::int64_t>(preperiod.size());
    if (k <= pre) return preperiod[static_cast<std::size_t>(k - 1)];
    if (period.empty()) {
      throw Error(ErrorCode::invalid_input, "empty period");
    }
    const auto len = static_cast<std::int64_t>(period.size());
    return period[static_cast<std::size_t>((k - 1 - pre) % len)];
  }

  std::int64_t preperiod_length() const {
    return static_cast<std::int64_t>(preperiod.size());
  }
  std::int64_t period_length() const {
    return static_cast<std::int64_t>(period.size());
  }

  friend bool operator==(const EventuallyPeriodicSequence&,
                         const EventuallyPeriodicSequence&) = default;
};

using WeightSequence = EventuallyPeriodicSequence<GaussianRational>;
using MetricSequence = EventuallyPeriodicSequence<Rational>;

/// T e_k = w_k e_{k+1} and A e_k = a_k e_k for k >= 1.
struct WeightedShiftInstance {
  WeightSequence weights;
  MetricSequence metric;

  /// Preperiod and period lengths covering both sequences.
  std::int64_t preperiod() const;
  std::int64_t period() const;

  /// Throws Error(invalid_input) on empty periods or negative metric values
  /// and Error(not_in_b_a) when some a_k = 0, w_k != 0, a_{k+1} != 0.
  void validate() const;

  /// sup over a_k != 0 of |w_k|^2 a_{k+1} / a_k, i.e. the squared A-seminorm
  /// of T. Always finite for eventually periodic data.
  Rational squared_a_bound() const;

  friend bool operator==(const WeightedShiftInstance&,
                         const WeightedShiftInstance&) = default;
};

/// Unit weights, identity metric: the unilateral shift.
WeightedShiftInstance unilateral_shift();

/// Weights v_k of the backward shift T^# e_k = v_k e_{k-1}, with v_1 = 0 and
/// v_k = (a_k / a_{k-1}) conj(w_{k-1}) when a_{k-1} != 0, else 0.
WeightSequence shift_a_adjoint(const WeightedShiftInstance& s);

enum class ShiftClass { normal, quasinormal };

struct ShiftVerdict {
  ShiftClass which = ShiftClass::normal;
  ClassIndex index;
  bool passed = false;
  std::int64_t window = 0;
  /// First k whose image coefficients differ.
  std::optional<std::int64_t> witness_k;
  GaussianRational lhs;
  GaussianRational rhs;
};

/// Coefficients of both sides of the class identity applied to e_k: the
/// left and right products land on the same basis vector.
struct ShiftCoefficients {
  GaussianRational lhs;
  GaussianRational rhs;
  std::int64_t target_index = 0;
};

ShiftCoefficients shift_class_coefficients(const WeightedShiftInstance& s,
                                           const WeightSequence& adjoint,
                                           ClassIndex idx, ShiftClass which,
                                           std::int64_t k);

/// Length of the window of k that decides the class exactly:
/// preperiod + (n + m + 2) * period.
std::int64_t decision_window(const WeightedShiftInstance& s, ClassIndex idx);

ShiftVerdict shift_class_check(const WeightedShiftInstance& s, ClassIndex idx,
                               ShiftClass which);

/// N x N sections of T and A in floating point.
struct FiniteSection {
  ComplexMatrix t;
  ComplexMatrix a;
};

FiniteSection finite_section(const WeightedShiftInstance& s, std::int64_t n);

Rational parse_rational(std::int64_t num, std::int64_t den);

}  // namespace anormal::shift
