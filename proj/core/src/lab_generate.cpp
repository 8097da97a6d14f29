#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/QR>

#include "anormal/lab.hpp"
#include "lab_internal.hpp"

namespace anormal::lab {

namespace detail {

ComplexMatrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  ComplexMatrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = Complex(g(rng), g(rng));
  }
  return out;
}

ComplexMatrix random_unitary(Rng& rng, Eigen::Index k) {
  if (k == 0) return ComplexMatrix(0, 0);
  const ComplexMatrix z = gaussian_matrix(rng, k, k);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  // Fixing the phases of diag(R) makes Q Haar distributed.
  for (Eigen::Index j = 0; j < k; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix well_conditioned(Rng& rng, Eigen::Index k) {
  const ComplexMatrix u = random_unitary(rng, k);
  const ComplexMatrix v = random_unitary(rng, k);
  Eigen::VectorXd s(k);
  for (Eigen::Index i = 0; i < k; ++i) s(i) = uniform(rng, 0.7, 1.4);
  return u * s.cast<Complex>().asDiagonal() * v.adjoint();
}

Complex unit_phase(Rng& rng) {
  return std::polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi));
}

Complex moderate_scalar(Rng& rng) {
  return uniform(rng, 0.6, 1.6) * unit_phase(rng);
}

}  // namespace detail

using namespace detail;

namespace {

constexpr std::string_view kFamilyNames[] = {
    "general_in_BA", "a_normal",      "scalar_power",
    "commuting_with_A", "isometry_V", "paper_example",
    "shift",         "nilpotent_sum", "commuting_pair",
};

}  // namespace

std::string_view to_string(Family f) {
  return kFamilyNames[static_cast<int>(f)];
}

Family family_from_string(std::string_view name) {
  for (int i = 0; i < static_cast<int>(std::size(kFamilyNames)); ++i) {
    if (kFamilyNames[i] == name) return static_cast<Family>(i);
  }
  throw Error(ErrorCode::invalid_input,
              "unknown generator family '" + std::string(name) + "'");
}

void GeneratorSpec::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::invalid_input, msg);
  };
  if (dim < 2 || dim > 16) fail("dim must lie in [2, 16]");
  if (metric_rank < 1 || metric_rank > dim) {
    fail("metric_rank must lie in [1, dim]");
  }
  if (!std::isfinite(scalar.real()) || !std::isfinite(scalar.imag())) {
    fail("scalar must be finite");
  }
  switch (family) {
    case Family::scalar_power:
      if (power < 1) fail("scalar_power needs power >= 1");
      if (!unimodular && scalar == Complex(0.0, 0.0)) {
        fail("scalar_power needs a nonzero scalar");
      }
      break;
    case Family::nilpotent_sum:
      if (power < 1) fail("nilpotent_sum needs a nilpotency index >= 1");
      break;
    case Family::commuting_with_a:
    case Family::isometry_v:
    case Family::commuting_pair:
      if (power < 0) fail("power must be >= 0");
      break;
    default:
      break;
  }
}

namespace {

// Operators in block coordinates R(A) + N(A): T11 acts on the first r
// coordinates, T22 on the remaining q = d - r.
struct Blocks {
  ComplexMatrix t11;
  ComplexMatrix t21;
  ComplexMatrix t22;
};

ComplexMatrix assemble(const Blocks& b) {
  const Eigen::Index r = b.t11.rows();
  const Eigen::Index q = b.t22.rows();
  ComplexMatrix out = ComplexMatrix::Zero(r + q, r + q);
  out.topLeftCorner(r, r) = b.t11;
  if (q > 0) {
    out.bottomLeftCorner(q, r) = b.t21;
    out.bottomRightCorner(q, q) = b.t22;
  }
  return out;
}

// D^{-1/2} W D^{1/2}: W is written in coordinates where A restricted to its
// range is the identity.
ComplexMatrix denormalize(const ComplexMatrix& w, const Eigen::VectorXd& d) {
  const Eigen::VectorXd s = d.cwiseSqrt();
  return s.cwiseInverse().cast<Complex>().asDiagonal() * w *
         s.cast<Complex>().asDiagonal();
}

Eigen::VectorXd random_metric_values(Rng& rng, Eigen::Index r) {
  Eigen::VectorXd d(r);
  for (Eigen::Index i = 0; i < r; ++i) d(i) = uniform(rng, 0.5, 2.0);
  return d;
}

// Splits k into consecutive group sizes.
std::vector<Eigen::Index> random_partition(Rng& rng, Eigen::Index k) {
  std::vector<Eigen::Index> sizes;
  Eigen::Index left = k;
  while (left > 0) {
    const auto s = static_cast<Eigen::Index>(uniform_int(rng, 1, static_cast<int>(left)));
    sizes.push_back(s);
    left -= s;
  }
  return sizes;
}

// G diag(c^{1/p} w^j) G^{-1} with w a primitive p-th root of unity; its p-th
// power is c I. At least two distinct roots appear when p, k >= 2.
ComplexMatrix power_block(Rng& rng, Eigen::Index k, int p, Complex c) {
  if (k == 0) return ComplexMatrix(0, 0);
  const Complex root = std::pow(c, 1.0 / p);
  Eigen::VectorXcd lambda(k);
  int first = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    int j = uniform_int(rng, 0, p - 1);
    if (i == 0) first = j;
    if (i == 1 && p >= 2 && j == first) j = (first + 1) % p;
    lambda(i) = root * std::polar(1.0, 2.0 * std::numbers::pi * j / p);
  }
  const ComplexMatrix g = well_conditioned(rng, k);
  return g * lambda.asDiagonal() * g.partialPivLu().inverse();
}

Eigen::VectorXcd normal_spectrum(Rng& rng, Eigen::Index k, bool allow_zero) {
  Eigen::VectorXcd lambda(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    lambda(i) = uniform(rng, 0.5, 1.5) * unit_phase(rng);
  }
  if (allow_zero && k > 0 && coin(rng, 0.3)) {
    lambda(uniform_int(rng, 0, static_cast<int>(k) - 1)) = 0.0;
  }
  return lambda;
}

ComplexMatrix normal_block(Rng& rng, Eigen::Index k, bool allow_zero) {
  if (k == 0) return ComplexMatrix(0, 0);
  const ComplexMatrix q = random_unitary(rng, k);
  return q * normal_spectrum(rng, k, allow_zero).asDiagonal() * q.adjoint();
}

ComplexMatrix general_block(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  if (rows == 0 || cols == 0) return ComplexMatrix::Zero(rows, cols);
  return gaussian_matrix(rng, rows, cols) /
         std::sqrt(static_cast<double>(std::max(rows, cols)));
}

// Direct sum of shifts with nonzero weights, chunks of size <= k, conjugated
// by a well-conditioned similarity: nilpotent of index <= k.
ComplexMatrix nilpotent_block(Rng& rng, Eigen::Index size, int k) {
  if (size == 0) return ComplexMatrix(0, 0);
  ComplexMatrix n = ComplexMatrix::Zero(size, size);
  Eigen::Index start = 0;
  while (start < size) {
    const Eigen::Index len =
        std::min<Eigen::Index>(uniform_int(rng, 1, k), size - start);
    for (Eigen::Index i = 1; i < len; ++i) {
      n(start + i, start + i - 1) = uniform(rng, 0.5, 1.5);
    }
    start += len;
  }
  const ComplexMatrix g = well_conditioned(rng, size);
  return g * n * g.partialPivLu().inverse();
}

struct Built {
  Eigen::VectorXd d;
  Blocks t;
  std::optional<Blocks> s;
  std::optional<Blocks> v;
};

Built build_general(Rng& rng, Eigen::Index r, Eigen::Index q) {
  Built b;
  b.d = random_metric_values(rng, r);
  b.t = {general_block(rng, r, r), general_block(rng, q, r),
         general_block(rng, q, q)};
  return b;
}

Built build_a_normal(Rng& rng, Eigen::Index r, Eigen::Index q, bool injective) {
  Built b;
  b.d = random_metric_values(rng, r);
  const ComplexMatrix w = normal_block(rng, r, !injective);
  b.t.t11 = denormalize(w, b.d);
  // T21 K = 0 for K = T^# restricted to R(A): rows of T21 in N(K^*).
  const ComplexMatrix k = b.d.cwiseInverse().cast<Complex>().asDiagonal() *
                          b.t.t11.adjoint() * b.d.cast<Complex>().asDiagonal();
  const ComplexMatrix left_null = identity(r) - k * pseudo_inverse(k, Tolerance{});
  b.t.t21 = coin(rng) ? ComplexMatrix(general_block(rng, q, r) * left_null)
                      : ComplexMatrix::Zero(q, r);
  b.t.t22 = injective ? well_conditioned(rng, q) : general_block(rng, q, q);
  return b;
}

Built build_scalar_power(Rng& rng, Eigen::Index r, Eigen::Index q, int p,
                         Complex c) {
  Built b;
  b.d = random_metric_values(rng, r);
  b.t.t11 = denormalize(power_block(rng, r, p, c), b.d);
  b.t.t21 = ComplexMatrix::Zero(q, r);
  b.t.t22 = power_block(rng, q, p, c);
  return b;
}

Built build_nilpotent_sum(Rng& rng, Eigen::Index r, Eigen::Index q, int k,
                          bool unimodular) {
  Built b;
  b.d = random_metric_values(rng, r);
  const Eigen::Index nil = std::min<Eigen::Index>(k, r);
  ComplexMatrix core = ComplexMatrix::Zero(r, r);
  for (Eigen::Index i = 0; i < r - nil; ++i) {
    core(i, i) = unimodular ? unit_phase(rng) : moderate_scalar(rng);
  }
  for (Eigen::Index i = 1; i < nil; ++i) {
    core(r - nil + i, r - nil + i - 1) = 1.0;
  }
  const ComplexMatrix u = random_unitary(rng, r);
  b.t.t11 = denormalize(u * core * u.adjoint(), b.d);
  b.t.t21 = ComplexMatrix::Zero(q, r);
  b.t.t22 = nilpotent_block(rng, q, k);
  return b;
}

// Metric values constant on groups, T block diagonal along the groups: then
// AT = TA and N(A) reduces T.
Built build_commuting_with_a(Rng& rng, Eigen::Index r, Eigen::Index q, int p) {
  Built b;
  b.d.resize(r);
  b.t.t11 = ComplexMatrix::Zero(r, r);
  const auto groups = random_partition(rng, r);
  const double step = 1.5 / static_cast<double>(groups.size());
  Eigen::Index at = 0;
  auto block = [&](Eigen::Index k) -> ComplexMatrix {
    if (p > 0) return power_block(rng, k, p, moderate_scalar(rng));
    const double u = uniform(rng, 0.0, 1.0);
    if (u < 0.4) return well_conditioned(rng, k);
    if (u < 0.7) return normal_block(rng, k, false);
    return power_block(rng, k, uniform_int(rng, 2, 3), moderate_scalar(rng));
  };
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const Eigen::Index k = groups[g];
    const double value = 0.5 + step * (static_cast<double>(g) + uniform(rng, 0.2, 0.8));
    b.d.segment(at, k).setConstant(value);
    b.t.t11.block(at, at, k, k) = block(k);
    at += k;
  }
  b.t.t21 = ComplexMatrix::Zero(q, r);
  b.t.t22 = q > 0 ? block(q) : ComplexMatrix(0, 0);
  return b;
}

Built build_isometry(Rng& rng, Eigen::Index r, Eigen::Index q, int p) {
  Built b;
  b.d = random_metric_values(rng, r);
  Blocks v;
  v.t11 = denormalize(random_unitary(rng, r), b.d);
  v.t21 = ComplexMatrix::Zero(q, r);
  v.t22 = general_block(rng, q, q);
  b.v = v;
  if (p > 0) {
    const Complex c = moderate_scalar(rng);
    b.t.t11 = denormalize(power_block(rng, r, p, c), b.d);
    b.t.t22 = power_block(rng, q, p, c);
  } else {
    b.t.t11 = denormalize(normal_block(rng, r, true), b.d);
    b.t.t22 = general_block(rng, q, q);
  }
  b.t.t21 = ComplexMatrix::Zero(q, r);
  return b;
}

// T and S share an orthonormal grouping (in normalized coordinates) on which
// S is scalar, so S commutes with T, T^# and S^# commutes with T.
Built build_commuting_pair(Rng& rng, Eigen::Index r, Eigen::Index q, int p,
                           bool hermitian) {
  Built b;
  b.d = random_metric_values(rng, r);
  const int exponent = p > 0 ? p : uniform_int(rng, 1, 3);
  ComplexMatrix wt = ComplexMatrix::Zero(r, r);
  ComplexMatrix ws = ComplexMatrix::Zero(r, r);
  Eigen::Index at = 0;
  for (Eigen::Index k : random_partition(rng, r)) {
    wt.block(at, at, k, k) = power_block(rng, k, exponent, moderate_scalar(rng));
    const Complex s = hermitian ? Complex(uniform(rng, -1.5, 1.5), 0.0)
                                : moderate_scalar(rng);
    ws.block(at, at, k, k) = s * identity(k);
    at += k;
  }
  const ComplexMatrix u = random_unitary(rng, r);
  b.t.t11 = denormalize(u * wt * u.adjoint(), b.d);
  b.t.t21 = ComplexMatrix::Zero(q, r);
  b.t.t22 = power_block(rng, q, exponent, moderate_scalar(rng));
  Blocks s;
  s.t11 = denormalize(u * ws * u.adjoint(), b.d);
  s.t21 = ComplexMatrix::Zero(q, r);
  s.t22 = q > 0 ? ComplexMatrix(moderate_scalar(rng) * identity(q) +
                                moderate_scalar(rng) * b.t.t22)
                : ComplexMatrix(0, 0);
  b.s = s;
  return b;
}

shift::Rational small_positive(Rng& rng) {
  static const std::pair<int, int> values[] = {{1, 1}, {2, 1}, {1, 2}, {3, 1}, {3, 2}};
  const auto& [num, den] = values[uniform_int(rng, 0, 4)];
  return shift::Rational(num) / shift::Rational(den);
}

shift::GaussianRational small_weight(Rng& rng) {
  using shift::GaussianRational;
  using shift::Rational;
  switch (uniform_int(rng, 0, 6)) {
    case 0: return GaussianRational(0);
    case 1: return GaussianRational(1);
    case 2: return GaussianRational(2);
    case 3: return GaussianRational(Rational(1, 2));
    case 4: return GaussianRational(-1);
    case 5: return GaussianRational(Rational(0), Rational(1));
    default: return GaussianRational(Rational(1), Rational(1));
  }
}

shift::WeightedShiftInstance build_shift(Rng& rng) {
  shift::WeightedShiftInstance s;
  const int pre_w = uniform_int(rng, 0, 2);
  const int len_w = uniform_int(rng, 1, 3);
  for (int i = 0; i < pre_w; ++i) s.weights.preperiod.push_back(small_weight(rng));
  for (int i = 0; i < len_w; ++i) s.weights.period.push_back(small_weight(rng));
  const int pre_a = uniform_int(rng, 0, 2);
  const int len_a = uniform_int(rng, 1, 3);
  for (int i = 0; i < pre_a; ++i) s.metric.preperiod.push_back(small_positive(rng));
  for (int i = 0; i < len_a; ++i) s.metric.period.push_back(small_positive(rng));
  return s;
}

BoundOperator rotate_bound(const MetricContext& ctx, const ComplexMatrix& u,
                   const Blocks& b) {
  return a_adjoint(ctx, u * assemble(b) * u.adjoint());
}

}  // namespace

DenseInstance make_instance(const ComplexMatrix& a, const ComplexMatrix& t,
                            const Tolerance& tol) {
  MetricContext ctx = make_context(a, tol);
  BoundOperator bound = a_adjoint(ctx, t);
  return DenseInstance{std::move(ctx), std::move(bound), std::nullopt,
                       std::nullopt, GeneratorSpec{}};
}

DenseInstance generate_dense(const GeneratorSpec& spec, const Tolerance& tol) {
  spec.validate();
  if (spec.family == Family::shift) {
    throw Error(ErrorCode::infeasible_spec,
                "shift instances have no dense representation");
  }
  if (spec.family == Family::paper_example) {
    if (spec.dim != 2 || spec.metric_rank != 2) {
      throw Error(ErrorCode::infeasible_spec,
                  "paper_example is 2x2 with an invertible metric");
    }
    ComplexMatrix a(2, 2);
    a << 1.0, 0.0, 0.0, 2.0;
    ComplexMatrix t(2, 2);
    t << 2.0, 0.0, 1.0, -2.0;
    DenseInstance inst = make_instance(a, t, tol);
    inst.origin = spec;
    return inst;
  }
  if (spec.family == Family::nilpotent_sum && spec.power > spec.dim) {
    throw Error(ErrorCode::infeasible_spec,
                "nilpotency index exceeds the dimension");
  }

  Rng rng(splitmix64(spec.seed));
  const Eigen::Index d = spec.dim;
  const Eigen::Index r = spec.metric_rank;
  const Eigen::Index q = d - r;

  Built built;
  switch (spec.family) {
    case Family::general_in_ba:
      built = build_general(rng, r, q);
      break;
    case Family::a_normal:
      built = build_a_normal(rng, r, q, spec.injective);
      break;
    case Family::scalar_power:
      built = build_scalar_power(rng, r, q, spec.power,
                                 spec.unimodular ? unit_phase(rng) : spec.scalar);
      break;
    case Family::commuting_with_a:
      built = build_commuting_with_a(rng, r, q, spec.power);
      break;
    case Family::isometry_v:
      built = build_isometry(rng, r, q, spec.power);
      break;
    case Family::nilpotent_sum:
      built = build_nilpotent_sum(rng, r, q, spec.power, spec.unimodular);
      break;
    case Family::commuting_pair:
      built = build_commuting_pair(rng, r, q, spec.power, spec.hermitian_partner);
      break;
    case Family::paper_example:
    case Family::shift:
      break;
  }

  const ComplexMatrix u = random_unitary(rng, d);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(d);
  diag.head(r) = built.d;
  const ComplexMatrix a = u * diag.cast<Complex>().asDiagonal() * u.adjoint();
  MetricContext ctx = make_context(a, tol);
  BoundOperator t = rotate_bound(ctx, u, built.t);
  std::optional<BoundOperator> s;
  std::optional<BoundOperator> v;
  if (built.s) s = rotate_bound(ctx, u, *built.s);
  if (built.v) v = rotate_bound(ctx, u, *built.v);
  return DenseInstance{std::move(ctx), std::move(t), std::move(s), std::move(v),
                       spec};
}

Instance generate(const GeneratorSpec& spec, const Tolerance& tol) {
  if (spec.family == Family::shift) {
    spec.validate();
    Rng rng(splitmix64(spec.seed));
    return ShiftInstance{build_shift(rng), spec};
  }
  return generate_dense(spec, tol);
}

}  // namespace anormal::lab
