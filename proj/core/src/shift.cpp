#include "anormal/shift.hpp"

#include <numeric>
#include <sstream>

namespace anormal::shift {

GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
  const Rational d = b.norm2();
  if (d == 0) throw Error(ErrorCode::invalid_input, "division by zero");
  const GaussianRational num = a * b.conj();
  return {num.re / d, num.im / d};
}

std::string GaussianRational::str() const {
  std::ostringstream os;
  os << re;
  if (im != 0) os << (im > 0 ? "+" : "-") << abs(im) << "i";
  return os.str();
}

std::complex<double> GaussianRational::to_complex() const {
  return {re.convert_to<double>(), im.convert_to<double>()};
}

Rational parse_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::parse_error, "zero denominator");
  return Rational(num) / Rational(den);
}

std::int64_t WeightedShiftInstance::preperiod() const {
  return std::max(weights.preperiod_length(), metric.preperiod_length());
}

std::int64_t WeightedShiftInstance::period() const {
  return std::lcm(weights.period_length(), metric.period_length());
}

void WeightedShiftInstance::validate() const {
  if (weights.period.empty() || metric.period.empty()) {
    throw Error(ErrorCode::invalid_input, "shift sequences need a period");
  }
  for (const auto* seq : {&metric.preperiod, &metric.period}) {
    for (const auto& a : *seq) {
      if (a < 0) throw Error(ErrorCode::invalid_input, "negative metric entry");
    }
  }
  const std::int64_t last = preperiod() + period() + 1;
  for (std::int64_t k = 1; k <= last; ++k) {
    if (metric.at(k) == 0 && !weights.at(k).is_zero() && metric.at(k + 1) != 0) {
      std::ostringstream os;
      os << "T e_" << k << " leaves N(A): a_" << k << " = 0, w_" << k
         << " != 0, a_" << k + 1 << " != 0";
      throw Error(ErrorCode::not_in_b_a, os.str());
    }
  }
}

Rational WeightedShiftInstance::squared_a_bound() const {
  Rational best = 0;
  const std::int64_t last = preperiod() + period();
  for (std::int64_t k = 1; k <= last; ++k) {
    const Rational& a = metric.at(k);
    if (a == 0) continue;
    const Rational q = weights.at(k).norm2() * metric.at(k + 1) / a;
    if (q > best) best = q;
  }
  return best;
}

WeightedShiftInstance unilateral_shift() {
  WeightedShiftInstance s;
  s.weights.period = {GaussianRational(1)};
  s.metric.period = {Rational(1)};
  return s;
}

WeightSequence shift_a_adjoint(const WeightedShiftInstance& s) {
  s.validate();
  auto value = [&](std::int64_t k) -> GaussianRational {
    if (k == 1) return {};
    const Rational& prev = s.metric.at(k - 1);
    if (prev == 0) return {};
    return GaussianRational(s.metric.at(k) / prev) * s.weights.at(k - 1).conj();
  };
  // v_k depends on k-1 and k, so it is periodic once k - 1 exceeds the
  // preperiod of the instance.
  WeightSequence v;
  const std::int64_t pre = s.preperiod() + 1;
  const std::int64_t len = s.period();
  for (std::int64_t k = 1; k <= pre; ++k) v.preperiod.push_back(value(k));
  for (std::int64_t k = pre + 1; k <= pre + len; ++k) {
    v.period.push_back(value(k));
  }
  return v;
}

namespace {

// w_k w_{k+1} ... w_{k+n-1}
GaussianRational forward_product(const WeightSequence& w, std::int64_t k,
                                 int n) {
  if (k < 1) return {};
  GaussianRational out(1);
  for (int i = 0; i < n; ++i) {
    out = out * w.at(k + i);
    if (out.is_zero()) break;
  }
  return out;
}

// v_k v_{k-1} ... v_{k-m+1}; zero once the chain would leave e_1.
GaussianRational backward_product(const WeightSequence& v, std::int64_t k,
                                  int m) {
  if (k - m < 1) return {};
  GaussianRational out(1);
  for (int i = 0; i < m; ++i) {
    out = out * v.at(k - i);
    if (out.is_zero()) break;
  }
  return out;
}

}  // namespace

ShiftCoefficients shift_class_coefficients(const WeightedShiftInstance& s,
                                           const WeightSequence& adjoint,
                                           ClassIndex idx, ShiftClass which,
                                           std::int64_t k) {
  const auto& w = s.weights;
  const auto& v = adjoint;
  const int n = idx.n;
  const int m = idx.m;
  ShiftCoefficients c;
  if (which == ShiftClass::normal) {
    // T^n (T#)^m e_k and (T#)^m T^n e_k both land on e_{k+n-m}.
    c.lhs = backward_product(v, k, m) * forward_product(w, k - m, n);
    c.rhs = forward_product(w, k, n) * backward_product(v, k + n, m);
    c.target_index = k + n - m;
  } else {
    // T^n (T#)^m T e_k and (T#)^m T T^n e_k both land on e_{k+1+n-m}.
    c.lhs = w.at(k) * backward_product(v, k + 1, m) *
            forward_product(w, k + 1 - m, n);
    c.rhs = forward_product(w, k, n + 1) * backward_product(v, k + n + 1, m);
    c.target_index = k + 1 + n - m;
  }
  return c;
}

std::int64_t decision_window(const WeightedShiftInstance& s, ClassIndex idx) {
  return s.preperiod() + static_cast<std::int64_t>(idx.n + idx.m + 2) * s.period();
}

ShiftVerdict shift_class_check(const WeightedShiftInstance& s, ClassIndex idx,
                               ShiftClass which) {
  idx.validate();
  const WeightSequence v = shift_a_adjoint(s);
  ShiftVerdict out;
  out.which = which;
  out.index = idx;
  out.window = decision_window(s, idx);
  for (std::int64_t k = 1; k <= out.window; ++k) {
    auto c = shift_class_coefficients(s, v, idx, which, k);
    if (!(c.lhs == c.rhs)) {
      out.passed = false;
      out.witness_k = k;
      out.lhs = std::move(c.lhs);
      out.rhs = std::move(c.rhs);
      return out;
    }
  }
  out.passed = true;
  return out;
}

FiniteSection finite_section(const WeightedShiftInstance& s, std::int64_t n) {
  if (n < 1) throw Error(ErrorCode::invalid_input, "section size must be >= 1");
  FiniteSection f;
  f.t = ComplexMatrix::Zero(n, n);
  f.a = ComplexMatrix::Zero(n, n);
  for (std::int64_t k = 1; k <= n; ++k) {
    f.a(k - 1, k - 1) = s.metric.at(k).convert_to<double>();
    if (k < n) f.t(k, k - 1) = s.weights.at(k).to_complex();
  }
  return f;
}

}  // namespace anormal::shift
