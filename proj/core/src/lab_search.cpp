#include <cmath>
#include <regex>

#include <Eigen/Eigenvalues>

#include "anormal/lab.hpp"
#include "lab_internal.hpp"

namespace anormal::lab {

using namespace detail;

SearchTarget parse_target(std::string_view text) {
  static const std::regex re(
      R"(^\s*(not_normal|not_qn|qn_not_normal)\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$)");
  std::cmatch match;
  if (!std::regex_match(text.begin(), text.end(), match, re)) {
    throw Error(ErrorCode::unknown_target,
                "unknown search target '" + std::string(text) +
                    "' (expected not_normal(n,m), not_qn(n,m) or qn_not_normal(n,m))");
  }
  SearchTarget t;
  const std::string kind = match[1];
  t.kind = kind == "not_normal" ? SearchKind::not_normal
           : kind == "not_qn"   ? SearchKind::not_quasinormal
                                : SearchKind::qn_not_normal;
  t.index = {std::stoi(match[2]), std::stoi(match[3])};
  t.index.validate();
  t.text = kind + "(" + std::to_string(t.index.n) + "," +
           std::to_string(t.index.m) + ")";
  return t;
}

namespace {

struct Scores {
  double normal = 0.0;
  double quasinormal = 0.0;
};

Scores score(const BoundOperator& t, ClassIndex idx) {
  return {nm_normal_residual(t, idx).residual,
          nm_quasinormal_residual(t, idx).residual};
}

bool qualifies(SearchKind kind, const Scores& s, const Tolerance& tol) {
  switch (kind) {
    case SearchKind::not_normal:
      return s.normal >= tol.distinctness_margin;
    case SearchKind::not_quasinormal:
      return s.quasinormal >= tol.distinctness_margin;
    case SearchKind::qn_not_normal:
      return s.quasinormal <= tol.residual_tol &&
             s.normal >= tol.distinctness_margin;
  }
  return false;
}

// Coordinates in which T is block lower triangular: the eigenbasis of A with
// the range first.
struct BlockFrame {
  ComplexMatrix u;
  Eigen::Index rank = 0;
};

BlockFrame block_frame(const MetricContext& ctx) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(ctx.metric());
  const Eigen::Index d = ctx.dim();
  const Eigen::Index r = ctx.rank();
  BlockFrame f;
  f.rank = r;
  f.u.resize(d, d);
  // Eigenvalues ascend: the last r columns span R(A).
  for (Eigen::Index j = 0; j < r; ++j) f.u.col(j) = eig.eigenvectors().col(d - r + j);
  for (Eigen::Index j = r; j < d; ++j) f.u.col(j) = eig.eigenvectors().col(j - r);
  return f;
}

class DenseSearch {
 public:
  DenseSearch(const SearchTarget& target, std::int64_t budget,
              const Tolerance& tol, SearchResult& out)
      : target_(target), budget_(budget), tol_(tol), out_(out) {}

  bool exhausted() const { return out_.evaluations >= budget_; }

  // Scores a candidate; returns true once a witness is stored.
  bool offer(const MetricContext& ctx, const ComplexMatrix& t) {
    ++out_.evaluations;
    std::optional<BoundOperator> bound;
    try {
      bound = a_adjoint(ctx, t);
    } catch (const Error&) {
      return false;
    }
    const Scores s = score(*bound, target_.index);
    last_ = s;
    if (s.normal >= tol_.distinctness_margin &&
        (!out_.best_objective || s.quasinormal < *out_.best_objective)) {
      out_.best_objective = s.quasinormal;
    }
    if (!qualifies(target_.kind, s, tol_)) return false;
    out_.found = true;
    out_.dense = DenseWitness{ctx.metric(), t, s.normal, s.quasinormal};
    return true;
  }

  // Coordinate descent on the entries of the block lower triangular part,
  // minimizing the quasinormal residual while the normal residual stays
  // clear of the margin.
  bool descend(const MetricContext& ctx, ComplexMatrix t) {
    const BlockFrame f = block_frame(ctx);
    const Eigen::Index d = ctx.dim();
    ComplexMatrix b = f.u.adjoint() * t * f.u;
    b.topRightCorner(f.rank, d - f.rank).setZero();
    auto to_op = [&](const ComplexMatrix& blk) -> ComplexMatrix {
      return f.u * blk * f.u.adjoint();
    };
    if (offer(ctx, to_op(b))) return true;
    double current = last_.normal >= 10 * tol_.distinctness_margin
                         ? last_.quasinormal
                         : std::numeric_limits<double>::infinity();
    double h = 0.25 * std::max(spectral_norm(b), 1e-3);
    int sweeps = 0;
    while (h > 1e-9 && sweeps < 40 && !exhausted()) {
      bool improved = false;
      for (Eigen::Index j = 0; j < d && !exhausted(); ++j) {
        for (Eigen::Index i = 0; i < d && !exhausted(); ++i) {
          if (i < f.rank && j >= f.rank) continue;
          for (const Complex step : {Complex(h, 0), Complex(-h, 0),
                                     Complex(0, h), Complex(0, -h)}) {
            ComplexMatrix trial = b;
            trial(i, j) += step;
            if (offer(ctx, to_op(trial))) return true;
            if (last_.normal >= 10 * tol_.distinctness_margin &&
                last_.quasinormal < current) {
              current = last_.quasinormal;
              b = trial;
              improved = true;
              break;
            }
            if (exhausted()) break;
          }
        }
      }
      if (!improved) h *= 0.5;
      ++sweeps;
    }
    return false;
  }

 private:
  const SearchTarget& target_;
  std::int64_t budget_;
  const Tolerance& tol_;
  SearchResult& out_;
  Scores last_;
};

void search_dense(SearchResult& out, int dim, std::int64_t budget, Rng& rng,
                  const Tolerance& tol) {
  DenseSearch search(out.target, budget, tol, out);
  if (dim == 2) {
    GeneratorSpec example;
    example.family = Family::paper_example;
    const auto inst = generate_dense(example, tol);
    if (search.offer(inst.ctx, inst.t.op())) return;
  }
  static constexpr Family kFamilies[] = {
      Family::general_in_ba, Family::nilpotent_sum, Family::scalar_power,
      Family::a_normal, Family::commuting_with_a};
  while (!search.exhausted()) {
    ++out.restarts;
    GeneratorSpec spec;
    spec.family = kFamilies[uniform_int(rng, 0, 4)];
    spec.dim = dim;
    spec.metric_rank = uniform_int(rng, 1, dim);
    spec.seed = rng();
    spec.power = uniform_int(rng, 1, std::min(dim, 4));
    spec.scalar = moderate_scalar(rng);
    DenseInstance inst = generate_dense(spec, tol);
    if (out.target.kind == SearchKind::qn_not_normal) {
      if (search.descend(inst.ctx, inst.t.op())) return;
    } else if (search.offer(inst.ctx, inst.t.op())) {
      return;
    }
  }
}

void search_shift(SearchResult& out, std::int64_t budget, std::uint64_t seed) {
  auto offer = [&](const shift::WeightedShiftInstance& s) {
    ++out.evaluations;
    const auto normal =
        shift::shift_class_check(s, out.target.index, shift::ShiftClass::normal);
    const auto qn = shift::shift_class_check(s, out.target.index,
                                             shift::ShiftClass::quasinormal);
    bool ok = false;
    switch (out.target.kind) {
      case SearchKind::not_normal: ok = !normal.passed; break;
      case SearchKind::not_quasinormal: ok = !qn.passed; break;
      case SearchKind::qn_not_normal: ok = qn.passed && !normal.passed; break;
    }
    if (ok) {
      out.found = true;
      out.shift = ShiftWitness{s, normal, qn};
    }
    return ok;
  };
  if (offer(shift::unilateral_shift())) return;
  Rng rng(splitmix64(seed));
  while (out.evaluations < budget) {
    GeneratorSpec spec;
    spec.family = Family::shift;
    spec.seed = rng();
    const auto inst = std::get<ShiftInstance>(generate(spec));
    if (offer(inst.shift)) return;
  }
}

}  // namespace

SearchResult search(std::string_view target, SearchDomain domain, int dim,
                    std::int64_t budget, std::uint64_t seed,
                    const Tolerance& tol) {
  SearchResult out;
  out.target = parse_target(target);
  out.domain = domain;
  if (budget < 1) throw Error(ErrorCode::invalid_input, "budget must be >= 1");
  tol.validate();
  if (domain == SearchDomain::shift) {
    search_shift(out, budget, seed);
    return out;
  }
  if (dim < 2 || dim > 16) {
    throw Error(ErrorCode::invalid_input, "dim must lie in [2, 16]");
  }
  Rng rng(splitmix64(seed));
  search_dense(out, dim, budget, rng, tol);
  return out;
}

}  // namespace anormal::lab
