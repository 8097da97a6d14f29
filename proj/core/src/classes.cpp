#include "anormal/classes.hpp"

#include <cmath>
#include <sstream>

namespace anormal {

void ClassIndex::validate(int max_index) const {
  if (n < 1 || m < 1 || n > max_index || m > max_index) {
    std::ostringstream os;
    os << "(n, m) = (" << n << ", " << m << ") outside [1, " << max_index
       << "]^2";
    throw Error(ErrorCode::index_out_of_range, os.str());
  }
}

ComplexMatrix sharp_power(const BoundOperator& t, int k) {
  return matrix_power(t.sharp(), k);
}

namespace {

ClassVerdict make_verdict(std::string name, std::optional<ClassIndex> idx,
                          double residual, const Tolerance& tol) {
  ClassVerdict v;
  v.predicate = std::move(name);
  v.index = idx;
  v.residual = residual;
  v.verdict = tol.classify(residual);
  v.tolerances = tol;
  return v;
}

}  // namespace

ClassVerdict nm_normal_residual(const BoundOperator& t, ClassIndex idx,
                                int max_index) {
  idx.validate(max_index);
  const ComplexMatrix tn = matrix_power(t.op(), idx.n);
  const ComplexMatrix sm = sharp_power(t, idx.m);
  const double scale = std::pow(spectral_norm(t.op()), idx.n) *
                       std::pow(t.sharp_norm(), idx.m);
  return make_verdict("nm_normal", idx,
                      scaled_residual(commutator(tn, sm), scale),
                      t.context().tolerance());
}

ClassVerdict nm_quasinormal_residual(const BoundOperator& t, ClassIndex idx,
                                     int max_index) {
  idx.validate(max_index);
  const ComplexMatrix tn = matrix_power(t.op(), idx.n);
  const ComplexMatrix smt = sharp_power(t, idx.m) * t.op();
  const double scale = std::pow(spectral_norm(t.op()), idx.n + 1) *
                       std::pow(t.sharp_norm(), idx.m);
  return make_verdict("nm_quasinormal", idx,
                      scaled_residual(commutator(tn, smt), scale),
                      t.context().tolerance());
}

ClassVerdict a_normal_verdict(const BoundOperator& t) {
  const double scale = spectral_norm(t.op()) * t.sharp_norm();
  return make_verdict("a_normal", std::nullopt,
                      scaled_residual(commutator(t.sharp(), t.op()), scale),
                      t.context().tolerance());
}

ClassVerdict a_selfadjoint_verdict(const BoundOperator& t) {
  const auto& a = t.context().metric();
  const double scale = t.context().metric_norm() * spectral_norm(t.op());
  return make_verdict("a_selfadjoint", std::nullopt,
                      scaled_residual(a * t.op() - t.op().adjoint() * a, scale),
                      t.context().tolerance());
}

namespace {

double isometry_residual(const ComplexMatrix& op, const ComplexMatrix& sharp,
                         const ComplexMatrix& p) {
  const double scale =
      std::max(spectral_norm(sharp) * spectral_norm(op), 1.0);
  return scaled_residual(sharp * op - p, scale);
}

}  // namespace

ClassVerdict a_isometry_verdict(const BoundOperator& t) {
  return make_verdict(
      "a_isometry", std::nullopt,
      isometry_residual(t.op(), t.sharp(), t.context().projector()),
      t.context().tolerance());
}

ClassVerdict a_unitary_verdict(const BoundOperator& t) {
  const auto& ctx = t.context();
  const BoundOperator adj =
      a_adjoint(ctx, t.sharp(),
                spectral_norm(ctx.dagger()) * spectral_norm(t.op()) *
                    ctx.metric_norm());
  const double res =
      std::max(isometry_residual(t.op(), t.sharp(), ctx.projector()),
               isometry_residual(adj.op(), adj.sharp(), ctx.projector()));
  return make_verdict("a_unitary", std::nullopt, res, ctx.tolerance());
}

std::vector<ClassVerdict> basic_class_predicates(const BoundOperator& t) {
  return {a_normal_verdict(t), a_selfadjoint_verdict(t), a_isometry_verdict(t),
          a_unitary_verdict(t)};
}

XyzOperators build_xyz(const BoundOperator& t, ClassIndex idx) {
  const ComplexMatrix tn = matrix_power(t.op(), idx.n);
  const ComplexMatrix sm = sharp_power(t, idx.m);
  return {tn + sm, tn - sm, tn * sm};
}

namespace {

ComplexMatrix checked_sqrt(const ComplexMatrix& product, const char* name,
                           const Tolerance& tol) {
  try {
    return psd_sqrt(product, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::spectrum_negative &&
        e.code() != ErrorCode::no_principal_sqrt) {
      throw;
    }
    std::ostringstream os;
    os << name
       << " is undefined for this operator; positivity is only guaranteed "
          "when TA = AT and N(A) reduces T (PT = TP). Underlying: "
       << e.what();
    throw Error(e.code(), os.str());
  }
}

}  // namespace

ComplexMatrix c_operator(const BoundOperator& t, int m) {
  if (m < 1) throw Error(ErrorCode::index_out_of_range, "m must be >= 1");
  return checked_sqrt(sharp_power(t, m) * matrix_power(t.op(), m), "C_{m,A}",
                      t.context().tolerance());
}

ComplexMatrix b_operator(const BoundOperator& t, int m) {
  if (m < 1) throw Error(ErrorCode::index_out_of_range, "m must be >= 1");
  return checked_sqrt(matrix_power(t.op(), m) * sharp_power(t, m), "B_{m,A}",
                      t.context().tolerance());
}

}  // namespace anormal
