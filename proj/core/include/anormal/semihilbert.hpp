#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "anormal/numerics.hpp"

namespace anormal {

/// A positive semidefinite metric A together with the objects derived from
/// it: the Moore-Penrose inverse, the square root, the pseudo-inverse of the
/// square root and the orthogonal projector P onto the range of A.
///
/// Immutable; copies share the cached data.
class MetricContext {
 public:
  const ComplexMatrix& metric() const { return data_->a; }
  const ComplexMatrix& dagger() const { return data_->a_dagger; }
  const ComplexMatrix& half() const { return data_->a_half; }
  const ComplexMatrix& half_dagger() const { return data_->a_half_dagger; }
  const ComplexMatrix& projector() const { return data_->p; }
  const Tolerance& tolerance() const { return data_->tol; }
  Eigen::Index dim() const { return data_->a.rows(); }
  Eigen::Index rank() const { return data_->rank; }
  double metric_norm() const { return data_->a_norm; }

  friend MetricContext make_context(const ComplexMatrix& a,
                                    const Tolerance& tol);

 private:
  struct Data {
    ComplexMatrix a;
    ComplexMatrix a_dagger;
    ComplexMatrix a_half;
    ComplexMatrix a_half_dagger;
    ComplexMatrix p;
    Tolerance tol;
    Eigen::Index rank = 0;
    double a_norm = 0.0;
  };
  explicit MetricContext(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;
};

/// Validates A (square, finite, Hermitian, no negative eigenvalues beyond
/// residual_tol * |A|) and caches the derived objects. A is replaced by its
/// Hermitian part.
MetricContext make_context(const ComplexMatrix& a, const Tolerance& tol = {});

/// An operator T in B_A(H) together with its A-adjoint A^+ T^* A, computed
/// once at construction.
class BoundOperator {
 public:
  const ComplexMatrix& op() const { return t_; }
  const ComplexMatrix& sharp() const { return sharp_; }
  const MetricContext& context() const { return ctx_; }
  Eigen::Index dim() const { return t_.rows(); }
  /// max(|T#|, distinctness_margin |A^+| |T| |A|); used as a residual scale so that a T#
  /// made of rounding noise does not inflate residuals.
  double sharp_norm() const { return sharp_norm_; }

  friend BoundOperator a_adjoint(const MetricContext& ctx,
                                 const ComplexMatrix& t, double factor_norm);

 private:
  BoundOperator(MetricContext ctx, ComplexMatrix t, ComplexMatrix sharp,
                double sharp_norm)
      : ctx_(std::move(ctx)),
        t_(std::move(t)),
        sharp_(std::move(sharp)),
        sharp_norm_(sharp_norm) {}
  MetricContext ctx_;
  ComplexMatrix t_;
  ComplexMatrix sharp_;
  double sharp_norm_ = 0.0;
};

struct MembershipVerdict {
  /// A^{1/2} T (I - P) = 0: T is bounded for the A-seminorm.
  Verdict in_b_upper_a = Verdict::indeterminate;
  /// (I - P) T^* A = 0: T admits an A-adjoint.
  Verdict in_b_a = Verdict::indeterminate;
  double residual_b_upper_a = 0.0;
  double residual_b_a = 0.0;
  /// Least c with |Th|_A <= c |h|_A; present iff in_b_upper_a passes.
  std::optional<double> bound_constant;
};

/// In finite dimensions both memberships reduce to T(N(A)) being contained in
/// N(A); reports keep them separate anyway.
inline constexpr const char* kFiniteDimensionMembershipNote =
    "finite dimension: both memberships reduce to T(N(A)) contained in N(A)";

/// <h|k>_A = <Ah, k>, linear in h and conjugate-linear in k.
Complex semi_inner_product(const MetricContext& ctx, const ComplexVector& h,
                           const ComplexVector& k);

double vector_seminorm(const MetricContext& ctx, const ComplexVector& h);

/// sup |Th|_A / |h|_A over h outside N(A), evaluated as the spectral norm of
/// A^{1/2} T (A^{1/2})^+.
double operator_seminorm(const MetricContext& ctx, const ComplexMatrix& t);

/// `factor_norm`, when T was computed as a product, is the product of the
/// factors' norms; residuals are then scaled by max(|T|, factor_norm) so that
/// a product cancelling to rounding noise is judged against its inputs.
MembershipVerdict membership(const MetricContext& ctx, const ComplexMatrix& t,
                             double factor_norm = 0.0);

/// Throws Error(not_in_b_a) unless membership in B_A passes.
BoundOperator a_adjoint(const MetricContext& ctx, const ComplexMatrix& t,
                        double factor_norm = 0.0);

/// (T^#)^#, checked against P T P.
ComplexMatrix double_sharp(const MetricContext& ctx, const BoundOperator& t);

struct ReImParts {
  ComplexMatrix re;
  ComplexMatrix im;
};

/// Re_A(T) = (T + T^#)/2 and Im_A(T) = (T - T^#)/(2i).
ReImParts re_im_parts(const BoundOperator& t);

}  // namespace anormal
