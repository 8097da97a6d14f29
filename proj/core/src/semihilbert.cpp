#include "anormal/semihilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace anormal {

MetricContext make_context(const ComplexMatrix& a, const Tolerance& tol) {
  tol.validate();
  require_square(a, "metric");
  require_finite(a, "metric");

  const double norm = spectral_norm(a);
  const double asym = spectral_norm(a - a.adjoint());
  if (asym > tol.residual_tol * norm) {
    std::ostringstream os;
    os << "|A - A^*| / |A| = " << asym / norm;
    throw Error(ErrorCode::not_hermitian, os.str());
  }

  auto d = std::make_shared<MetricContext::Data>();
  d->tol = tol;
  d->a = 0.5 * (a + a.adjoint());
  d->a_norm = norm;

  if (d->a.size() > 0) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(d->a,
                                                     Eigen::EigenvaluesOnly);
    const double smallest = eig.eigenvalues()(0);
    if (smallest < -tol.residual_tol * norm) {
      std::ostringstream os;
      os << "smallest eigenvalue " << smallest << " (|A| = " << norm << ")";
      throw Error(ErrorCode::negative_eigenvalue, os.str());
    }
  }

  d->a_dagger = pseudo_inverse(d->a, tol);
  d->a_half = psd_sqrt(d->a, tol);
  d->a_half_dagger = pseudo_inverse(d->a_half, tol);
  d->p = orthogonal_projector_onto_range(d->a, tol);
  d->rank = numerical_rank(d->a, tol);
  return MetricContext(std::move(d));
}

namespace {

void require_dim(const MetricContext& ctx, const ComplexMatrix& t,
                 std::string_view what) {
  require_square(t, what);
  if (t.rows() != ctx.dim()) {
    std::ostringstream os;
    os << what << " is " << t.rows() << "x" << t.cols() << " but the metric is "
       << ctx.dim() << "x" << ctx.dim();
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
}

void require_vector_dim(const MetricContext& ctx, const ComplexVector& v) {
  if (v.size() != ctx.dim()) {
    std::ostringstream os;
    os << "vector of length " << v.size() << " against metric of dimension "
       << ctx.dim();
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
}

}  // namespace

Complex semi_inner_product(const MetricContext& ctx, const ComplexVector& h,
                           const ComplexVector& k) {
  require_vector_dim(ctx, h);
  require_vector_dim(ctx, k);
  // Eigen's dot conjugates its left operand: k.dot(x) = k^* x = <x, k>.
  return k.dot(ctx.metric() * h);
}

double vector_seminorm(const MetricContext& ctx, const ComplexVector& h) {
  const double q = semi_inner_product(ctx, h, h).real();
  if (q < 0.0) {
    const double slack =
        ctx.tolerance().residual_tol * ctx.metric_norm() * h.squaredNorm();
    if (q < -slack) {
      std::ostringstream os;
      os << "<h|h>_A = " << q << " is negative";
      throw Error(ErrorCode::metric_violation, os.str());
    }
    return 0.0;
  }
  return std::sqrt(q);
}

MembershipVerdict membership(const MetricContext& ctx, const ComplexMatrix& t,
                             double factor_norm) {
  require_dim(ctx, t, "operator");
  require_finite(t, "operator");
  const auto& tol = ctx.tolerance();
  const ComplexMatrix complement = identity(ctx.dim()) - ctx.projector();
  const double t_norm = std::max(spectral_norm(t), factor_norm);

  MembershipVerdict out;
  out.residual_b_a = scaled_residual(complement * t.adjoint() * ctx.metric(),
                                     t_norm * ctx.metric_norm());
  out.residual_b_upper_a = scaled_residual(ctx.half() * t * complement,
                                           spectral_norm(ctx.half()) * t_norm);
  out.in_b_a = tol.classify(out.residual_b_a);
  out.in_b_upper_a = tol.classify(out.residual_b_upper_a);
  if (out.in_b_upper_a == Verdict::pass) {
    out.bound_constant = spectral_norm(ctx.half() * t * ctx.half_dagger());
  }
  return out;
}

double operator_seminorm(const MetricContext& ctx, const ComplexMatrix& t) {
  const auto m = membership(ctx, t);
  if (m.in_b_upper_a != Verdict::pass) {
    std::ostringstream os;
    os << "A^{1/2} T (I - P) residual " << m.residual_b_upper_a;
    throw Error(ErrorCode::not_in_b_upper_a, os.str());
  }
  return *m.bound_constant;
}

BoundOperator a_adjoint(const MetricContext& ctx, const ComplexMatrix& t,
                        double factor_norm) {
  const auto m = membership(ctx, t, factor_norm);
  if (m.in_b_a != Verdict::pass) {
    std::ostringstream os;
    os << "(I - P) T^* A residual " << m.residual_b_a << " ("
       << to_string(m.in_b_a) << ")";
    throw Error(ErrorCode::not_in_b_a, os.str());
  }
  ComplexMatrix sharp = ctx.dagger() * t.adjoint() * ctx.metric();

  const auto& tol = ctx.tolerance();
  const double t_norm = std::max(spectral_norm(t), factor_norm);
  const double adj_res =
      scaled_residual(ctx.metric() * sharp - t.adjoint() * ctx.metric(),
                      ctx.metric_norm() * t_norm);
  // Scaled by the factors of A^+ T^* A, not by |T#|, which may be rounding
  // noise when T^* A vanishes.
  const double factors = spectral_norm(ctx.dagger()) * t_norm * ctx.metric_norm();
  const double range_res = scaled_residual(
      (identity(ctx.dim()) - ctx.projector()) * sharp, factors);
  if (adj_res > tol.residual_tol || range_res > tol.residual_tol) {
    std::ostringstream os;
    os << "A-adjoint postconditions violated (A T# - T*A: " << adj_res
       << ", (I-P) T#: " << range_res << ")";
    throw Error(ErrorCode::metric_violation, os.str());
  }
  // Below margin * factors, |T#| is not told apart from zero: a T# that is
  // rounding noise would otherwise make every residual scaled by it blow up.
  const double floor = tol.distinctness_margin * factors;
  const double sharp_norm = std::max(spectral_norm(sharp), floor);
  return BoundOperator(ctx, t, std::move(sharp), sharp_norm);
}

ComplexMatrix double_sharp(const MetricContext& ctx, const BoundOperator& t) {
  const ComplexMatrix twice =
      a_adjoint(ctx, t.sharp(),
                spectral_norm(ctx.dagger()) * spectral_norm(t.op()) *
                    ctx.metric_norm())
          .sharp();
  const ComplexMatrix& p = ctx.projector();
  const double res =
      scaled_residual(twice - p * t.op() * p, spectral_norm(t.op()));
  if (res > ctx.tolerance().residual_tol) {
    std::ostringstream os;
    os << "(T#)# differs from P T P by " << res;
    throw Error(ErrorCode::metric_violation, os.str());
  }
  return twice;
}

ReImParts re_im_parts(const BoundOperator& t) {
  const Complex two_i(0.0, 2.0);
  return {0.5 * (t.op() + t.sharp()), (t.op() - t.sharp()) / two_i};
}

}  // namespace anormal
