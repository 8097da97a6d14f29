#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

#include "anormal/lab.hpp"

namespace anormal::lab {

namespace {

// Indices produced internally (lcm, n + m, ...) exceed the user-facing bound.
constexpr int kInternalMaxIndex = 64;

std::string indexed(std::string_view name, int n, int m) {
  std::ostringstream os;
  os << name << "(" << n << "," << m << ")";
  return os.str();
}

std::string indexed(std::string_view name, int k) {
  std::ostringstream os;
  os << name << "(" << k << ")";
  return os.str();
}

class Recorder {
 public:
  Recorder(const Tolerance& tol, std::vector<NamedResidual>& out)
      : tol_(tol), out_(out) {}

  void set_prefix(std::string p) { prefix_ = std::move(p); }

  Verdict zero(std::string_view name, double residual) {
    note(name, residual);
    return tol_.classify(residual);
  }

  void note(std::string_view name, double value) {
    out_.push_back({prefix_ + std::string(name), value});
  }

  const Tolerance& tol() const { return tol_; }

 private:
  const Tolerance& tol_;
  std::vector<NamedResidual>& out_;
  std::string prefix_;
};

using Term = std::function<Verdict(Recorder&)>;

struct Part {
  std::vector<Term> premise;
  std::vector<Term> conclusion;
};

Verdict equivalent(Verdict a, Verdict b) {
  if (a == Verdict::indeterminate || b == Verdict::indeterminate) {
    return Verdict::indeterminate;
  }
  return a == b ? Verdict::pass : Verdict::fail;
}

Verdict implies(Verdict a, Verdict b) {
  if (a == Verdict::fail) return Verdict::pass;
  if (a == Verdict::indeterminate) {
    return b == Verdict::pass ? Verdict::pass : Verdict::indeterminate;
  }
  return b;
}

double pw(double x, int k) { return std::pow(x, k); }

// ---------------------------------------------------------------------------
// Term builders. Every residual is relative to the norms of its factors.

Term normal_term(const BoundOperator& t, int n, int m,
                 std::string_view label = "normal") {
  return [&t, n, m, label](Recorder& r) {
    return r.zero(indexed(label, n, m),
                  nm_normal_residual(t, {n, m}, kInternalMaxIndex).residual);
  };
}

Term qn_term(const BoundOperator& t, int n, int m,
             std::string_view label = "qn") {
  return [&t, n, m, label](Recorder& r) {
    return r.zero(indexed(label, n, m),
                  nm_quasinormal_residual(t, {n, m}, kInternalMaxIndex).residual);
  };
}

Term reduces_term(const BoundOperator& t) {
  return [&t](Recorder& r) {
    const auto& p = t.context().projector();
    return r.zero("PT=TP", scaled_residual(commutator(p, t.op()),
                                           spectral_norm(t.op())));
  };
}

Term commutes_with_metric_term(const BoundOperator& t) {
  return [&t](Recorder& r) {
    const auto& ctx = t.context();
    return r.zero("AT=TA",
                  scaled_residual(commutator(ctx.metric(), t.op()),
                                  ctx.metric_norm() * spectral_norm(t.op())));
  };
}

Term full_rank_term(std::string name, std::function<ComplexMatrix()> make) {
  return [name = std::move(name), make = std::move(make)](Recorder& r) {
    const ComplexMatrix m = make();
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& s = svd.singularValues();
    const double ratio = s.size() == 0 || s(0) == 0.0 ? 0.0 : s(s.size() - 1) / s(0);
    r.note(name + ".sigma_ratio", ratio);
    return full_rank_verdict(m, r.tol());
  };
}

// T^m (T#)^m T^m = T^m.
Term partial_isometry_term(const BoundOperator& t, int m) {
  return [&t, m](Recorder& r) {
    const ComplexMatrix tm = matrix_power(t.op(), m);
    const ComplexMatrix sm = sharp_power(t, m);
    const double scale = pw(spectral_norm(t.op()), 2 * m) *
                         pw(t.sharp_norm(), m);
    return r.zero(indexed("partial_isometry", m),
                  scaled_residual(tm * sm * tm - tm, scale));
  };
}

// (T#)^m ... the dual condition (T#)^n T^n (T#)^n = (T#)^n.
Term sharp_partial_isometry_term(const BoundOperator& t, int n) {
  return [&t, n](Recorder& r) {
    const ComplexMatrix tn = matrix_power(t.op(), n);
    const ComplexMatrix sn = sharp_power(t, n);
    const double scale = pw(t.sharp_norm(), 2 * n) *
                         pw(spectral_norm(t.op()), n);
    return r.zero(indexed("sharp_partial_isometry", n),
                  scaled_residual(sn * tn * sn - sn, scale));
  };
}

struct Characterization {
  double form = 0.0;
  double range = 0.0;
};

// Form and range conditions of the commutator characterizations. With
// `extra_t` both sides carry a trailing factor T (quasinormal version).
Characterization characterization(const BoundOperator& t, int n, int m,
                                  bool extra_t) {
  const auto& ctx = t.context();
  const ComplexMatrix& a = ctx.metric();
  const ComplexMatrix tn = matrix_power(t.op(), n);
  const ComplexMatrix tm = matrix_power(t.op(), m);
  const ComplexMatrix sn = sharp_power(t, n);
  const ComplexMatrix sm = sharp_power(t, m);
  const double nt = spectral_norm(t.op());
  const double ns = t.sharp_norm();
  const ComplexMatrix tail = extra_t ? t.op() : identity(t.dim());
  const double tail_norm = extra_t ? nt : 1.0;

  Characterization c;
  const ComplexMatrix lhs = sn.adjoint() * a * sm * tail;
  const ComplexMatrix rhs = tm.adjoint() * a * tn * tail;
  const double form_scale = ctx.metric_norm() * tail_norm *
                            std::max(pw(ns, n + m), pw(nt, n + m));
  c.form = scaled_residual(lhs - rhs, form_scale);
  const ComplexMatrix complement = identity(t.dim()) - ctx.projector();
  c.range = scaled_residual(complement * tn * sm * tail,
                            pw(nt, n) * pw(ns, m) * tail_norm);
  return c;
}

Term characterization_term(const BoundOperator& t, int n, int m, bool extra_t) {
  return [&t, n, m, extra_t](Recorder& r) {
    const auto c = characterization(t, n, m, extra_t);
    const Verdict f = r.zero(indexed(extra_t ? "qn_form" : "form", n, m), c.form);
    const Verdict g =
        r.zero(indexed(extra_t ? "qn_range" : "range", n, m), c.range);
    return all_of({f, g});
  };
}

// ---------------------------------------------------------------------------
// Rows

struct RowContext {
  const DenseInstance& inst;
  ClassIndex idx;
  // Operators derived while building the row live here so terms can refer
  // to them by reference.
  std::vector<std::unique_ptr<BoundOperator>> keep;

  const BoundOperator& hold(BoundOperator b) {
    keep.push_back(std::make_unique<BoundOperator>(std::move(b)));
    return *keep.back();
  }
};

using RowFn = std::function<std::vector<Part>(RowContext&)>;

const BoundOperator& partner(const DenseInstance& in) {
  if (!in.s) {
    throw Error(ErrorCode::invalid_input,
                "check needs a partner operator S (commuting_pair family)");
  }
  return *in.s;
}

const BoundOperator& isometry(const DenseInstance& in) {
  if (!in.v) {
    throw Error(ErrorCode::invalid_input,
                "check needs an isometry V (isometry_V family)");
  }
  return *in.v;
}

std::vector<Part> row_thm2_1(RowContext& c, bool forward, bool quasi) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  Term cls = quasi ? qn_term(t, n, m) : normal_term(t, n, m);
  Term chr = characterization_term(t, n, m, quasi);
  if (forward) return {Part{{cls}, {chr}}};
  return {Part{{chr}, {cls}}};
}

std::vector<Part> row_pro2_1_swap(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  Term invariant = [&t](Recorder& r) {
    const auto& p = t.context().projector();
    return r.zero("(I-P)TP", scaled_residual(
                                 (identity(t.dim()) - p) * t.op() * p,
                                 spectral_norm(t.op())));
  };
  Term swap = [&t, n, m](Recorder& r) {
    const Verdict a = normal_term(t, n, m)(r);
    const Verdict b = normal_term(t, m, n)(r);
    return equivalent(a, b);
  };
  return {Part{{invariant}, {swap}}};
}

// (T^j)# = (T#)^j on B_A, so "T^j is A-normal" is the (j,j) commutator; it
// keeps the power scaling, which stays meaningful when T^j is nearly zero.
std::vector<Part> row_th21_lcm(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  const int j = std::lcm(n, m);
  auto power_normal = [&t](int k) -> Term {
    return [&t, k](Recorder& r) {
      return r.zero(indexed("a_normal_power", k),
                    nm_normal_residual(t, {k, k}, kInternalMaxIndex).residual);
    };
  };
  return {Part{{normal_term(t, n, m)}, {power_normal(j), power_normal(n * m)}}};
}

std::vector<Part> row_pro22_xyz(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  Term body = [&t, n, m](Recorder& r) {
    const ComplexMatrix tn = matrix_power(t.op(), n);
    const auto xyz = build_xyz(t, {n, m});
    const double a = pw(spectral_norm(t.op()), n);
    const double b = pw(t.sharp_norm(), m);
    const double s = a * b;
    const Verdict normal = normal_term(t, n, m)(r);
    const Verdict xy =
        r.zero("[X,Y]", scaled_residual(commutator(xyz.x, xyz.y), 2.0 * s));
    const Verdict tx =
        r.zero("[T^n,X]", scaled_residual(commutator(tn, xyz.x), s));
    const Verdict ty =
        r.zero("[T^n,Y]", scaled_residual(commutator(tn, xyz.y), s));
    const Verdict zx = r.zero(
        "[Z,X]", scaled_residual(commutator(xyz.z, xyz.x), s * (a + b)));
    const Verdict zy = r.zero(
        "[Z,Y]", scaled_residual(commutator(xyz.z, xyz.y), s * (a + b)));
    return all_of({equivalent(xy, normal), equivalent(tx, normal),
                   equivalent(ty, normal), implies(normal, all_of({zx, zy}))});
  };
  return {Part{{}, {body}}};
}

std::vector<Part> row_conj_isometry(RowContext& c) {
  const auto& t = c.inst.t;
  const auto& v = isometry(c.inst);
  const int n = c.idx.n;
  const int m = c.idx.m;
  Term v_isometry = [&v](Recorder& r) {
    return r.zero("V_isometry", a_isometry_verdict(v).residual);
  };
  Term pv = [&v](Recorder& r) {
    const auto& p = v.context().projector();
    return r.zero("PV=VP",
                  scaled_residual(commutator(p, v.op()), spectral_norm(v.op())));
  };
  const auto& w =
      c.hold(a_adjoint(t.context(), v.op() * t.op() * v.sharp(),
                       spectral_norm(v.op()) * spectral_norm(t.op()) *
                           v.sharp_norm()));
  return {Part{{v_isometry, reduces_term(t), pv, normal_term(t, n, m)},
               {normal_term(w, n, m, "normal_VTV#")}}};
}

std::vector<Part> row_product(RowContext& c, bool selfadjoint) {
  const auto& t = c.inst.t;
  const auto& s = partner(c.inst);
  const int n = c.idx.n;
  Term ts = [&t, &s](Recorder& r) {
    return r.zero("TS=ST", scaled_residual(commutator(t.op(), s.op()),
                                           spectral_norm(t.op()) *
                                               spectral_norm(s.op())));
  };
  Term st_sharp = [&t, &s](Recorder& r) {
    return r.zero("ST#=T#S", scaled_residual(commutator(s.op(), t.sharp()),
                                             spectral_norm(s.op()) *
                                                 t.sharp_norm()));
  };
  Term s_class = [&s, selfadjoint](Recorder& r) {
    return selfadjoint
               ? r.zero("S_selfadjoint", a_selfadjoint_verdict(s).residual)
               : r.zero("S_normal", a_normal_verdict(s).residual);
  };
  const auto& prod = c.hold(a_adjoint(
      t.context(), t.op() * s.op(), spectral_norm(t.op()) * spectral_norm(s.op())));
  return {Part{{ts, st_sharp, normal_term(t, n, n), s_class},
               {normal_term(prod, n, n, "normal_TS")}}};
}

std::vector<Part> row_induction(RowContext& c, bool quasi) {
  const auto& t = c.inst.t;
  const int m = c.idx.m;
  auto cls = [quasi, &t](int n, int mm) {
    return quasi ? qn_term(t, n, mm) : normal_term(t, n, mm);
  };
  std::vector<Term> conclusion;
  for (int n = 4; n <= 8; ++n) conclusion.push_back(cls(n, m));
  return {Part{{cls(2, m), cls(3, m)}, conclusion}};
}

std::vector<Part> row_step(RowContext& c, bool quasi) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  auto cls = [quasi, &t](int a, int b) {
    return quasi ? qn_term(t, a, b) : normal_term(t, a, b);
  };
  return {Part{{cls(n, m), cls(n + 1, m)}, {cls(n + 2, m)}}};
}

std::vector<Part> row_pro26(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  return {Part{{full_rank_term("T_injective", [&t] { return t.op(); }),
                normal_term(t, n, m), normal_term(t, n + 1, m)},
               {normal_term(t, 1, m)}}};
}

std::vector<Part> row_pro27(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  std::vector<Term> upward;
  for (int k = 4; k <= 8; ++k) upward.push_back(normal_term(t, n, k));
  return {Part{{normal_term(t, n, 2), normal_term(t, n, 3)}, upward},
          Part{{normal_term(t, n, m), normal_term(t, n, m + 1)},
               {normal_term(t, n, m + 2)}}};
}

std::vector<Part> row_pro29(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  return {Part{{full_rank_term("T#_injective", [&t] { return t.sharp(); }),
                normal_term(t, n, m), normal_term(t, n, m + 1)},
               {normal_term(t, n, 1)}}};
}

std::vector<Part> row_th23(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  std::vector<Part> parts;
  if (n >= m) {
    parts.push_back(Part{{normal_term(t, n, m), partial_isometry_term(t, m)},
                         {normal_term(t, n + m, m)}});
  }
  if (m >= n) {
    parts.push_back(
        Part{{normal_term(t, n, m), sharp_partial_isometry_term(t, n)},
             {normal_term(t, n, m + n)}});
  }
  return parts;
}

std::vector<Part> row_sq_identity(RowContext& c, bool quasi) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  Term identity_term = [&t, n, m, quasi](Recorder& r) {
    const ComplexMatrix tn = matrix_power(t.op(), n);
    const ComplexMatrix sm = sharp_power(t, m);
    const ComplexMatrix t2n = matrix_power(t.op(), 2 * n);
    const ComplexMatrix s2m = sharp_power(t, 2 * m);
    const double scale = pw(spectral_norm(t.op()), 2 * n) *
                         pw(t.sharp_norm(), 2 * m);
    const ComplexMatrix diff = quasi ? ComplexMatrix(s2m * t2n - (sm * tn) * (sm * tn))
                                     : ComplexMatrix(t2n * s2m - (tn * sm) * (tn * sm));
    return r.zero("squared_identity", scaled_residual(diff, scale));
  };
  return {Part{{quasi ? qn_term(t, n, m) : normal_term(t, n, m)},
               {identity_term}}};
}

std::vector<Part> row_pro_aa(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  Term power_normal = [&t, n](Recorder& r) {
    const ComplexMatrix tn = matrix_power(t.op(), n);
    const double nn = spectral_norm(tn);
    return r.zero(indexed("standard_normal_power", n),
                  scaled_residual(commutator(tn, tn.adjoint()), nn * nn));
  };
  std::vector<Term> conclusion;
  for (int m = 1; m <= 8; ++m) conclusion.push_back(normal_term(t, n, m));
  return {Part{{commutes_with_metric_term(t), reduces_term(t), power_normal},
               conclusion}};
}

std::vector<Part> row_cor_aa(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  Term standard = [&t, n, m](Recorder& r) {
    const ComplexMatrix tn = matrix_power(t.op(), n);
    const ComplexMatrix tm = matrix_power(t.op(), m);
    const double nn = spectral_norm(tn);
    const double nm = spectral_norm(tm);
    return r.zero(indexed("standard_normal", n, m),
                  scaled_residual(commutator(tn, tm.adjoint()), nn * nm));
  };
  const int j = std::lcm(n, m);
  std::vector<Term> conclusion;
  for (int k = 1; k <= 8; ++k) conclusion.push_back(normal_term(t, j, k));
  return {Part{{commutes_with_metric_term(t), reduces_term(t), standard},
               conclusion}};
}

std::vector<Part> row_pro3_1(RowContext& c) {
  const auto& t = c.inst.t;
  const auto& s = partner(c.inst);
  const int n = c.idx.n;
  const int m = c.idx.m;
  auto comm = [](std::string name, const ComplexMatrix& x,
                 const ComplexMatrix& y) -> Term {
    return [name = std::move(name), &x, &y](Recorder& r) {
      return r.zero(name, scaled_residual(commutator(x, y),
                                          spectral_norm(x) * spectral_norm(y)));
    };
  };
  const auto& prod = c.hold(a_adjoint(
      t.context(), s.op() * t.op(), spectral_norm(s.op()) * spectral_norm(t.op())));
  return {Part{{comm("ST=TS", s.op(), t.op()), comm("ST#=T#S", s.op(), t.sharp()),
                comm("TS#=S#T", t.op(), s.sharp()), normal_term(t, n, m),
                normal_term(s, n, m, "normal_S")},
               {qn_term(prod, n, m, "qn_ST")}}};
}

std::vector<Part> row_th31(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  if (n < m) return {};
  return {Part{{qn_term(t, n, m), partial_isometry_term(t, m)},
               {qn_term(t, n + m, m)}}};
}

std::vector<Part> row_pro34_1(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  return {Part{{full_rank_term("T_injective", [&t] { return t.op(); }),
                qn_term(t, n, m), qn_term(t, n + 1, m)},
               {qn_term(t, 1, m)}}};
}

std::vector<Part> row_pro34_2(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  Term range = [&t, m](Recorder& r) {
    const ComplexMatrix smt = sharp_power(t, m) * t.op();
    const auto rank = numerical_rank(smt, r.tol());
    r.note(indexed("rank_S^mT", m), static_cast<double>(rank));
    return rank_equals_verdict(smt, t.context().rank(), r.tol());
  };
  return {Part{{full_rank_term("T*_injective", [&t] { return ComplexMatrix(t.op().adjoint()); }),
                range, qn_term(t, n, m), qn_term(t, n, m + 1)},
               {normal_term(t, n, 1)}}};
}

// C commutes with Re_A(T^k) and Im_A(T^k), built from T^k and (T#)^k; scale
// |C| (|T^k| + |(T#)^k|).
Verdict commutes_with_parts(Recorder& r, std::string_view label,
                            const ComplexMatrix& c, const BoundOperator& t,
                            int k) {
  const ComplexMatrix x = matrix_power(t.op(), k);
  const ComplexMatrix xs = sharp_power(t, k);
  const ComplexMatrix re = 0.5 * (x + xs);
  const ComplexMatrix im = (x - xs) / Complex(0.0, 2.0);
  const double scale = spectral_norm(c) * (spectral_norm(x) + spectral_norm(xs));
  const Verdict vr = r.zero(std::string(label) + "_Re",
                            scaled_residual(commutator(c, re), scale));
  const Verdict vi = r.zero(std::string(label) + "_Im",
                            scaled_residual(commutator(c, im), scale));
  return all_of({vr, vi});
}

std::vector<Term> density_premise(const BoundOperator& t, int m) {
  return {full_rank_term(indexed("T^(m-1)_full_rank", m - 1),
                         [&t, m] { return matrix_power(t.op(), m - 1); }),
          commutes_with_metric_term(t), reduces_term(t)};
}

std::vector<Part> row_th37(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  Term equiv = [&t, n, m](Recorder& r) {
    const Verdict qn = qn_term(t, n, m)(r);
    ComplexMatrix cm;
    try {
      cm = c_operator(t, m);
    } catch (const Error&) {
      r.note("C_undefined", 1.0);
      return Verdict::indeterminate;
    }
    return equivalent(qn, commutes_with_parts(r, "C", cm, t, n));
  };
  return {Part{density_premise(t, m), {equiv}}};
}

std::vector<Part> row_th2_2(RowContext& c) {
  const auto& t = c.inst.t;
  const int n = c.idx.n;
  const int m = c.idx.m;
  auto premise = density_premise(t, m);
  premise.push_back([&t, n, m](Recorder& r) {
    ComplexMatrix b;
    ComplexMatrix cm;
    try {
      b = b_operator(t, m);
      cm = c_operator(t, m);
    } catch (const Error&) {
      r.note("B_or_C_undefined", 1.0);
      return Verdict::indeterminate;
    }
    const Verdict parts = commutes_with_parts(r, "B", b, t, m);
    const ComplexMatrix tn = matrix_power(t.op(), n);
    const double scale = pw(spectral_norm(t.op()), n + m) *
                         pw(t.sharp_norm(), m);
    const Verdict link = r.zero("C^2T^n=T^nB^2",
                                scaled_residual(cm * cm * tn - tn * b * b, scale));
    return all_of({parts, link});
  });
  return {Part{premise, {qn_term(t, m, m)}}};
}

std::vector<Part> row_remark_inclusion(RowContext& c) {
  const auto& t = c.inst.t;
  return {Part{{normal_term(t, c.idx.n, c.idx.m)}, {qn_term(t, c.idx.n, c.idx.m)}}};
}

struct Row {
  CheckInfo info;
  RowFn fn;
};

const std::vector<Row>& rows() {
  static const std::vector<Row> table = {
      {{"thm2_1_fwd", "(n,m)-A-normal implies the form and range conditions"},
       [](RowContext& c) { return row_thm2_1(c, true, false); }},
      {{"thm2_1_bwd", "the form and range conditions imply (n,m)-A-normal"},
       [](RowContext& c) { return row_thm2_1(c, false, false); }},
      {{"pro2_1_swap", "if (I-P)TP = 0 then (n,m)-A-normal iff (m,n)-A-normal"},
       row_pro2_1_swap},
      {{"th21_lcm", "(n,m)-A-normal implies T^lcm(n,m) and T^nm A-normal"},
       row_th21_lcm},
      {{"pro22_xyz", "[X,Y], [T^n,X], [T^n,Y] vanish iff (n,m)-A-normal; then [Z,X] = [Z,Y] = 0"},
       row_pro22_xyz},
      {{"conj_isometry", "V T V# is (n,m)-A-normal for an A-isometry V with PV = VP, PT = TP", false, true},
       row_conj_isometry},
      {{"prod_selfadj", "TS is (n,n)-A-normal for commuting A-selfadjoint S", true},
       [](RowContext& c) { return row_product(c, true); }},
      {{"prod_normal", "TS is (n,n)-A-normal for commuting A-normal S", true},
       [](RowContext& c) { return row_product(c, false); }},
      {{"pro24_induction", "(2,m) and (3,m) imply (n,m) for 4 <= n <= 8"},
       [](RowContext& c) { return row_induction(c, false); }},
      {{"pro25_step", "(n,m) and (n+1,m) imply (n+2,m)"},
       [](RowContext& c) { return row_step(c, false); }},
      {{"pro26_injective", "T injective, (n,m) and (n+1,m) imply (1,m)"},
       row_pro26},
      {{"pro27_dual", "(n,2) and (n,3) imply (n,k) for k <= 8; (n,m) and (n,m+1) imply (n,m+2)"},
       row_pro27},
      {{"pro29_sharp_injective", "T# injective, (n,m) and (n,m+1) imply (n,1)"},
       row_pro29},
      {{"th23_partial", "(n,m)-A-normal with T^m a partial isometry implies (n+m,m); dual for m >= n"},
       row_th23},
      {{"sq_identity_normal", "(n,m)-A-normal implies T^2n T#^2m = (T^n T#^m)^2"},
       [](RowContext& c) { return row_sq_identity(c, false); }},
      {{"proAA_fuglede", "AT = TA, PT = TP, T^n normal imply (n,m)-A-normal for m <= 8"},
       row_pro_aa},
      {{"corAA_lcm", "AT = TA, PT = TP, T (n,m)-normal imply (lcm(n,m),r)-A-normal"},
       row_cor_aa},
      {{"thm3_1_fwd", "(n,m)-A-quasinormal implies the form and range conditions"},
       [](RowContext& c) { return row_thm2_1(c, true, true); }},
      {{"thm3_1_bwd", "the form and range conditions imply (n,m)-A-quasinormal"},
       [](RowContext& c) { return row_thm2_1(c, false, true); }},
      {{"pro3_1_product", "commuting (n,m)-A-normal S, T have (n,m)-A-quasinormal product", true},
       row_pro3_1},
      {{"pro33_step", "(n,m)-QN and (n+1,m)-QN imply (n+2,m)-QN"},
       [](RowContext& c) { return row_step(c, true); }},
      {{"th31_partial", "(n,m)-QN, n >= m, T^m a partial isometry imply (n+m,m)-QN"},
       row_th31},
      {{"pro34_1", "T injective, (n,m)-QN and (n+1,m)-QN imply (1,m)-QN"},
       row_pro34_1},
      {{"pro34_2", "T* injective, R(T#^m T) = R(A), (n,m)-QN and (n,m+1)-QN imply (n,1)-A-normal"},
       row_pro34_2},
      {{"pro35_induction", "(2,m)-QN and (3,m)-QN imply (n,m)-QN for 4 <= n <= 8"},
       [](RowContext& c) { return row_induction(c, true); }},
      {{"th37_equiv", "under density and commuting hypotheses, (n,m)-QN iff C commutes with Re_A(T^n), Im_A(T^n)"},
       row_th37},
      {{"th2_2_bcond", "B commuting with Re_A(T^m), Im_A(T^m) and C^2T^n = T^nB^2 imply (m,m)-QN"},
       row_th2_2},
      {{"sq_identity_qn", "(n,m)-QN implies T#^2m T^2n = (T#^m T^n)^2"},
       [](RowContext& c) { return row_sq_identity(c, true); }},
      {{"remark_inclusion", "(n,m)-A-normal implies (n,m)-A-quasinormal"},
       row_remark_inclusion},
  };
  return table;
}

const Row& find_row(std::string_view id) {
  for (const auto& row : rows()) {
    if (row.info.id == id) return row;
  }
  throw Error(ErrorCode::unknown_check, "unknown check '" + std::string(id) + "'");
}

ConclusionStatus to_conclusion(Verdict v) {
  switch (v) {
    case Verdict::pass: return ConclusionStatus::pass;
    case Verdict::fail: return ConclusionStatus::fail;
    case Verdict::indeterminate: break;
  }
  return ConclusionStatus::indeterminate;
}

}  // namespace

std::string_view to_string(PremiseStatus s) {
  switch (s) {
    case PremiseStatus::satisfied: return "satisfied";
    case PremiseStatus::vacuous: return "vacuous";
    case PremiseStatus::indeterminate: break;
  }
  return "indeterminate";
}

std::string_view to_string(ConclusionStatus s) {
  switch (s) {
    case ConclusionStatus::pass: return "pass";
    case ConclusionStatus::fail: return "fail";
    case ConclusionStatus::indeterminate: return "indeterminate";
    case ConclusionStatus::not_evaluated: break;
  }
  return "not_evaluated";
}

const std::vector<CheckInfo>& registry() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> out;
    for (const auto& row : rows()) out.push_back(row.info);
    return out;
  }();
  return infos;
}

const CheckInfo& check_info(std::string_view id) { return find_row(id).info; }

CheckReport run_check(std::string_view check_id, const DenseInstance& inst,
                      ClassIndex idx) {
  const Row& row = find_row(check_id);
  idx.validate(kDefaultMaxIndex);

  CheckReport report;
  report.check_id = std::string(row.info.id);
  report.index = idx;
  if (row.info.id == "prod_selfadj" || row.info.id == "prod_normal") {
    report.index.m = idx.n;
  }

  RowContext ctx{inst, report.index, {}};
  const auto parts = row.fn(ctx);
  Recorder rec(inst.ctx.tolerance(), report.residuals);

  bool any_satisfied = false;
  bool any_indeterminate = false;
  Verdict conclusion = Verdict::pass;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string tag = parts.size() > 1 ? "[" + std::to_string(i + 1) + "]" : "";
    rec.set_prefix("premise" + tag + ":");
    Verdict premise = Verdict::pass;
    for (const auto& term : parts[i].premise) {
      premise = all_of({premise, term(rec)});
      if (premise == Verdict::fail) break;
    }
    if (premise == Verdict::indeterminate) any_indeterminate = true;
    if (premise != Verdict::pass) continue;
    any_satisfied = true;
    rec.set_prefix("conclusion" + tag + ":");
    for (const auto& term : parts[i].conclusion) {
      conclusion = all_of({conclusion, term(rec)});
    }
  }

  if (any_satisfied) {
    report.premise = PremiseStatus::satisfied;
    report.conclusion = to_conclusion(conclusion);
  } else {
    report.premise =
        any_indeterminate ? PremiseStatus::indeterminate : PremiseStatus::vacuous;
    report.conclusion = ConclusionStatus::not_evaluated;
  }
  if (report.conclusion == ConclusionStatus::fail) report.witness = inst.origin;
  return report;
}

std::vector<CheckReport> run_check(std::string_view check_id,
                                   const DenseInstance& inst,
                                   std::span<const ClassIndex> indices) {
  std::vector<CheckReport> out;
  out.reserve(indices.size());
  for (const auto& idx : indices) out.push_back(run_check(check_id, inst, idx));
  return out;
}

}  // namespace anormal::lab
