#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anormal/semihilbert.hpp"

namespace anormal {

inline constexpr int kDefaultMaxIndex = 8;

struct ClassIndex {
  int n = 1;
  int m = 1;

  /// Throws Error(index_out_of_range) unless 1 <= n, m <= max_index.
  void validate(int max_index = kDefaultMaxIndex) const;

  friend bool operator==(const ClassIndex&, const ClassIndex&) = default;
};

struct ClassVerdict {
  std::string predicate;
  std::optional<ClassIndex> index;
  double residual = 0.0;
  Verdict verdict = Verdict::indeterminate;
  Tolerance tolerances;
};

/// [T^n, (T^#)^m] scaled by |T|^n |T^#|^m.
ClassVerdict nm_normal_residual(const BoundOperator& t, ClassIndex idx,
                                int max_index = kDefaultMaxIndex);

/// [T^n, (T^#)^m T] scaled by |T|^{n+1} |T^#|^m.
ClassVerdict nm_quasinormal_residual(const BoundOperator& t, ClassIndex idx,
                                     int max_index = kDefaultMaxIndex);

ClassVerdict a_normal_verdict(const BoundOperator& t);
ClassVerdict a_selfadjoint_verdict(const BoundOperator& t);
ClassVerdict a_isometry_verdict(const BoundOperator& t);
ClassVerdict a_unitary_verdict(const BoundOperator& t);

/// A-normal, A-selfadjoint, A-isometry and A-unitary, in that order.
std::vector<ClassVerdict> basic_class_predicates(const BoundOperator& t);

struct XyzOperators {
  ComplexMatrix x;  // T^n + (T^#)^m
  ComplexMatrix y;  // T^n - (T^#)^m
  ComplexMatrix z;  // T^n (T^#)^m
};

XyzOperators build_xyz(const BoundOperator& t, ClassIndex idx);

/// Principal square root of (T^#)^m T^m. Throws with a diagnostic naming the
/// commuting hypotheses when the product is not positive.
ComplexMatrix c_operator(const BoundOperator& t, int m);

/// Principal square root of T^m (T^#)^m.
ComplexMatrix b_operator(const BoundOperator& t, int m);

/// (T^#)^k, always a power of the cached adjoint and never the adjoint of a
/// power.
ComplexMatrix sharp_power(const BoundOperator& t, int k);

}  // namespace anormal
