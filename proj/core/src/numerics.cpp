#include "anormal/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace anormal {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::not_hermitian: return "not-hermitian";
    case ErrorCode::negative_eigenvalue: return "negative-eigenvalue";
    case ErrorCode::spectrum_negative: return "spectrum-negative";
    case ErrorCode::no_principal_sqrt: return "no-principal-sqrt";
    case ErrorCode::metric_violation: return "metric-violation";
    case ErrorCode::not_in_b_upper_a: return "not-in-B^A";
    case ErrorCode::not_in_b_a: return "not-in-B_A";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::infeasible_spec: return "infeasible-spec";
    case ErrorCode::unknown_check: return "unknown-check";
    case ErrorCode::unknown_target: return "unknown-target";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::file_not_found: return "file-not-found";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

void Tolerance::validate() const {
  if (!(rank_cutoff > 0.0 && rank_cutoff < 1.0)) {
    throw Error(ErrorCode::invalid_input, "rank_cutoff must lie in (0, 1)");
  }
  if (!(residual_tol > 0.0 && residual_tol < distinctness_margin)) {
    throw Error(ErrorCode::invalid_input,
                "need 0 < residual_tol < distinctness_margin");
  }
}

Verdict Tolerance::classify(double residual) const {
  if (!std::isfinite(residual)) return Verdict::indeterminate;
  if (residual <= residual_tol) return Verdict::pass;
  if (residual >= distinctness_margin) return Verdict::fail;
  return Verdict::indeterminate;
}

Verdict all_of(std::initializer_list<Verdict> verdicts) {
  Verdict out = Verdict::pass;
  for (Verdict v : verdicts) {
    if (v == Verdict::fail) return Verdict::fail;
    if (v == Verdict::indeterminate) out = Verdict::indeterminate;
  }
  return out;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

void require_finite(const ComplexMatrix& m, std::string_view what) {
  if (!all_finite(m)) {
    throw Error(ErrorCode::invalid_input,
                std::string(what) + " has non-finite entries");
  }
}

void require_square(const ComplexMatrix& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << " must be square, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
}

namespace {

Eigen::VectorXd singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

}  // namespace

double spectral_norm(const ComplexMatrix& m) {
  auto s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(0);
}

Eigen::Index numerical_rank(const ComplexMatrix& m, const Tolerance& tol) {
  auto s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = tol.rank_cutoff * s(0);
  return (s.array() > cut).count();
}

Verdict full_rank_verdict(const ComplexMatrix& m, const Tolerance& tol) {
  if (m.cols() == 0) return Verdict::pass;
  if (m.rows() < m.cols()) return Verdict::fail;
  auto s = singular_values(m);
  if (s(0) == 0.0) return Verdict::fail;
  const double ratio = s(s.size() - 1) / s(0);
  if (ratio > tol.distinctness_margin) return Verdict::pass;
  if (ratio <= tol.rank_cutoff) return Verdict::fail;
  return Verdict::indeterminate;
}

Verdict rank_equals_verdict(const ComplexMatrix& m, Eigen::Index expected,
                            const Tolerance& tol) {
  auto s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) {
    return expected == 0 ? Verdict::pass : Verdict::fail;
  }
  // Singular values strictly between the cutoff and the margin make the rank
  // ambiguous.
  Eigen::Index confident = 0;
  bool ambiguous = false;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double r = s(i) / s(0);
    if (r > tol.distinctness_margin) {
      ++confident;
    } else if (r > tol.rank_cutoff) {
      ambiguous = true;
    }
  }
  if (ambiguous) return Verdict::indeterminate;
  return confident == expected ? Verdict::pass : Verdict::fail;
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, const Tolerance& tol) {
  require_finite(m, "pseudo_inverse input");
  if (m.size() == 0) return ComplexMatrix::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<ComplexMatrix> svd(m,
                                      Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  ComplexMatrix out = ComplexMatrix::Zero(m.cols(), m.rows());
  if (s(0) == 0.0) return out;
  const double cut = tol.rank_cutoff * s(0);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= cut) break;
    out.noalias() +=
        (svd.matrixV().col(i) / s(i)) * svd.matrixU().col(i).adjoint();
  }
  return out;
}

ComplexMatrix orthogonal_projector_onto_range(const ComplexMatrix& m,
                                              const Tolerance& tol) {
  require_finite(m, "projector input");
  ComplexMatrix p = ComplexMatrix::Zero(m.rows(), m.rows());
  if (m.size() == 0) return p;
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return p;
  const double cut = tol.rank_cutoff * s(0);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= cut) break;
    p.noalias() += svd.matrixU().col(i) * svd.matrixU().col(i).adjoint();
  }
  return ComplexMatrix(0.5 * (p + p.adjoint()));
}

namespace {

ComplexMatrix hermitian_sqrt(const ComplexMatrix& m, double norm,
                             const Tolerance& tol) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  Eigen::VectorXd lambda = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -tol.residual_tol * norm) {
      std::ostringstream os;
      os << "eigenvalue " << lambda(i) << " is negative (|M| = " << norm << ")";
      throw Error(ErrorCode::spectrum_negative, os.str());
    }
    lambda(i) = lambda(i) <= tol.rank_cutoff * norm ? 0.0 : std::sqrt(lambda(i));
  }
  const auto& v = eig.eigenvectors();
  ComplexMatrix r = v * lambda.cast<Complex>().asDiagonal() * v.adjoint();
  return 0.5 * (r + r.adjoint());
}

ComplexMatrix schur_sqrt(const ComplexMatrix& m, double norm,
                         const Tolerance& tol) {
  Eigen::ComplexSchur<ComplexMatrix> schur(m);
  const ComplexMatrix& t = schur.matrixT();
  const ComplexMatrix& u = schur.matrixU();
  const Eigen::Index n = m.rows();

  ComplexMatrix r = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex lambda = t(i, i);
    if (std::abs(lambda.imag()) > tol.residual_tol * norm ||
        lambda.real() < -tol.residual_tol * norm) {
      std::ostringstream os;
      os << "eigenvalue (" << lambda.real() << ", " << lambda.imag()
         << ") is outside the closed right half-line";
      throw Error(ErrorCode::spectrum_negative, os.str());
    }
    const double re = lambda.real();
    r(i, i) = re <= tol.rank_cutoff * norm ? 0.0 : std::sqrt(re);
  }
  const double small = std::sqrt(tol.rank_cutoff * norm);
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = j - 1; i >= 0; --i) {
      Complex s = t(i, j);
      for (Eigen::Index k = i + 1; k < j; ++k) s -= r(i, k) * r(k, j);
      const Complex denom = r(i, i) + r(j, j);
      if (std::abs(denom) <= small) {
        if (std::abs(s) <= tol.residual_tol * norm) {
          r(i, j) = 0.0;
          continue;
        }
        throw Error(ErrorCode::no_principal_sqrt,
                    "zero eigenvalue with a nontrivial Jordan block");
      }
      r(i, j) = s / denom;
    }
  }
  return u * r * u.adjoint();
}

}  // namespace

ComplexMatrix psd_sqrt(const ComplexMatrix& m, const Tolerance& tol) {
  require_square(m, "psd_sqrt input");
  require_finite(m, "psd_sqrt input");
  const double norm = spectral_norm(m);
  if (norm == 0.0) return ComplexMatrix::Zero(m.rows(), m.cols());

  const bool hermitian =
      spectral_norm(m - m.adjoint()) <= tol.residual_tol * norm;
  ComplexMatrix r =
      hermitian ? hermitian_sqrt(m, norm, tol) : schur_sqrt(m, norm, tol);

  const double back = spectral_norm(r * r - m);
  if (back > tol.residual_tol * norm) {
    std::ostringstream os;
    os << "square root does not square back (residual " << back / norm << ")";
    throw Error(ErrorCode::no_principal_sqrt, os.str());
  }
  return r;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    std::ostringstream os;
    os << "commutator of " << a.rows() << "x" << a.cols() << " and "
       << b.rows() << "x" << b.cols();
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
  return a * b - b * a;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, int k) {
  require_square(m, "matrix_power input");
  if (k < 0) throw Error(ErrorCode::invalid_input, "negative matrix power");
  ComplexMatrix result = ComplexMatrix::Identity(m.rows(), m.cols());
  ComplexMatrix base = m;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

double scaled_residual(const ComplexMatrix& x, double scale) {
  return spectral_norm(x) / (scale + std::numeric_limits<double>::min());
}

ComplexMatrix identity(Eigen::Index n) {
  return ComplexMatrix::Identity(n, n);
}

}  // namespace anormal
