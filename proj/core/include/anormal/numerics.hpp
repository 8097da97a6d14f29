#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

#include "anormal/error.hpp"

namespace anormal {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Outcome of testing "X = 0" for a floating-point residual.
///
/// A residual at or below `residual_tol` passes, one at or above
/// `distinctness_margin` fails, anything in between is indeterminate.
enum class Verdict { pass, fail, indeterminate };

std::string_view to_string(Verdict v);

struct Tolerance {
  double rank_cutoff = 1e-10;
  double residual_tol = 1e-9;
  double distinctness_margin = 1e-6;

  /// Throws Error(invalid_input) unless 0 < rank_cutoff < 1 and
  /// 0 < residual_tol < distinctness_margin.
  void validate() const;

  Verdict classify(double residual) const;

  friend bool operator==(const Tolerance&, const Tolerance&) = default;
};

/// Conjunction of verdicts: any fail fails, otherwise any indeterminate is
/// indeterminate.
Verdict all_of(std::initializer_list<Verdict> verdicts);

bool all_finite(const ComplexMatrix& m);
void require_finite(const ComplexMatrix& m, std::string_view what);
void require_square(const ComplexMatrix& m, std::string_view what);

/// Largest singular value.
double spectral_norm(const ComplexMatrix& m);

/// Number of singular values above rank_cutoff * sigma_max.
Eigen::Index numerical_rank(const ComplexMatrix& m, const Tolerance& tol);

/// Three-zone verdict for "m has full column rank": passes when
/// sigma_min > margin * sigma_max, fails when sigma_min <= rank_cutoff *
/// sigma_max.
Verdict full_rank_verdict(const ComplexMatrix& m, const Tolerance& tol);

/// Three-zone verdict for "numerical rank of m equals `expected`".
Verdict rank_equals_verdict(const ComplexMatrix& m, Eigen::Index expected,
                            const Tolerance& tol);

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, const Tolerance& tol);

/// Hermitian idempotent onto the numerical column space of m.
ComplexMatrix orthogonal_projector_onto_range(const ComplexMatrix& m,
                                              const Tolerance& tol);

/// Principal square root of a matrix whose spectrum lies in the closed right
/// half-line.
///
/// Nearly Hermitian inputs go through a symmetrized eigendecomposition; the
/// rest through a complex Schur form. Eigenvalues within rank_cutoff * |M| of
/// zero are treated as zero. Throws Error(spectrum_negative) when an
/// eigenvalue is negative or non-real beyond residual_tol * |M|, and
/// Error(no_principal_sqrt) when the Schur recurrence breaks down (defective
/// zero eigenvalue) or the result does not square back.
ComplexMatrix psd_sqrt(const ComplexMatrix& m, const Tolerance& tol);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// m^k by repeated squaring; m^0 is the identity.
ComplexMatrix matrix_power(const ComplexMatrix& m, int k);

/// |X| / (scale + tiny), the residual convention used everywhere.
double scaled_residual(const ComplexMatrix& x, double scale);

ComplexMatrix identity(Eigen::Index n);

}  // namespace anormal
