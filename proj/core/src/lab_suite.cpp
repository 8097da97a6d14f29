#include <algorithm>
#include <functional>
#include <numeric>

#include "anormal/lab.hpp"
#include "lab_internal.hpp"

namespace anormal::lab {

using namespace detail;

void SuiteConfig::validate() const {
  auto fail = [](const char* msg) { throw Error(ErrorCode::invalid_input, msg); };
  if (trials < 1) fail("trials must be >= 1");
  if (dim_min < 2 || dim_max > 16 || dim_min > dim_max) {
    fail("dimension range must satisfy 2 <= dim_min <= dim_max <= 16");
  }
  if (index_max < 1 || index_max > kDefaultMaxIndex) {
    fail("index_max must lie in [1, 8]");
  }
  tol.validate();
  for (const auto& id : checks) check_info(id);
}

bool SuiteSummary::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const RowSummary& r) {
    return r.fail == 0 && r.errors == 0 && !r.vacuous_only();
  });
}

int SuiteSummary::total_failures() const {
  return std::accumulate(rows.begin(), rows.end(), 0,
                         [](int acc, const RowSummary& r) { return acc + r.fail; });
}

namespace {

struct Recipe {
  Family family;
  double weight;
  std::function<void(Rng&, Sample&)> shape;
};

int divisor_of(Rng& rng, int k) {
  std::vector<int> divs;
  for (int d = 1; d <= k; ++d) {
    if (k % d == 0) divs.push_back(d);
  }
  return divs[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(divs.size()) - 1))];
}

// Shapers adjust a base sample (random dim, rank and index) toward a premise.

void full_rank(Rng&, Sample& s) { s.spec.metric_rank = s.spec.dim; }

auto power_dividing(bool of_n) {
  return [of_n](Rng& rng, Sample& s) {
    s.spec.power = divisor_of(rng, of_n ? s.index.n : s.index.m);
    if (coin(rng, 0.3)) {
      s.spec.unimodular = true;
    } else {
      s.spec.scalar = moderate_scalar(rng);
    }
  };
}

// Nilpotent part of index <= bound.
auto nilpotent_up_to(std::function<int(const ClassIndex&)> bound,
                     bool unimodular) {
  return [bound = std::move(bound), unimodular](Rng& rng, Sample& s) {
    const int k = std::min(bound(s.index), s.spec.dim);
    s.spec.power = uniform_int(rng, 1, std::max(k, 1));
    s.spec.unimodular = unimodular;
  };
}

void two_by_two_example(Rng&, Sample& s) {
  s.spec.dim = 2;
  s.spec.metric_rank = 2;
}

void any(Rng&, Sample&) {}

void injective(Rng&, Sample& s) { s.spec.injective = true; }

auto compose(std::function<void(Rng&, Sample&)> a,
             std::function<void(Rng&, Sample&)> b) {
  return [a = std::move(a), b = std::move(b)](Rng& rng, Sample& s) {
    a(rng, s);
    b(rng, s);
  };
}

void n_at_least_m(Rng&, Sample& s) {
  if (s.index.n < s.index.m) std::swap(s.index.n, s.index.m);
}

// Base recipes shared by the class-membership rows: A-normal instances, power
// scalars whose exponent divides n or m, and nilpotent perturbations.
std::vector<Recipe> member_recipes(bool nilpotent_dominates_n = true) {
  std::vector<Recipe> r = {
      {Family::a_normal, 3, any},
      {Family::scalar_power, 2, power_dividing(true)},
      {Family::scalar_power, 2, power_dividing(false)},
      {Family::paper_example, 1, two_by_two_example},
      {Family::general_in_ba, 1, any},
  };
  if (nilpotent_dominates_n) {
    r.push_back({Family::nilpotent_sum, 2,
                 nilpotent_up_to([](const ClassIndex& i) { return i.n; }, false)});
  }
  return r;
}

std::vector<Recipe> recipes_for(std::string_view id) {
  auto small_nil = [](int k) {
    return nilpotent_up_to([k](const ClassIndex&) { return k; }, false);
  };
  auto partial_iso = [](bool dual) {
    return nilpotent_up_to(
        [dual](const ClassIndex& i) { return dual ? i.n : std::min(i.n, i.m); },
        true);
  };

  if (id == "thm2_1_fwd" || id == "thm2_1_bwd" || id == "thm3_1_fwd" ||
      id == "thm3_1_bwd" || id == "sq_identity_normal" ||
      id == "sq_identity_qn" || id == "remark_inclusion" ||
      id == "pro22_xyz") {
    return member_recipes();
  }
  if (id == "th21_lcm") {
    return {{Family::a_normal, 3, any},
            {Family::scalar_power, 2, power_dividing(true)},
            {Family::scalar_power, 2, power_dividing(false)},
            {Family::nilpotent_sum, 1,
             nilpotent_up_to([](const ClassIndex& i) { return i.n; }, false)},
            {Family::paper_example, 1, two_by_two_example}};
  }
  if (id == "pro2_1_swap") {
    return {{Family::scalar_power, 2, power_dividing(true)},
            {Family::nilpotent_sum, 2,
             nilpotent_up_to([](const ClassIndex& i) { return std::max(i.n, i.m); }, false)},
            {Family::isometry_v, 1, any},
            {Family::commuting_with_a, 1, any},
            {Family::a_normal, 2, any},
            {Family::paper_example, 1, two_by_two_example},
            {Family::general_in_ba, 1, full_rank}};
  }
  if (id == "conj_isometry") {
    return {{Family::isometry_v, 2,
             [](Rng& rng, Sample& s) {
               s.spec.power = divisor_of(rng, coin(rng) ? s.index.n : s.index.m);
             }},
            {Family::isometry_v, 1, [](Rng&, Sample& s) { s.spec.power = 0; }}};
  }
  if (id == "prod_selfadj" || id == "prod_normal") {
    const bool herm = id == "prod_selfadj";
    return {{Family::commuting_pair, 1, [herm](Rng& rng, Sample& s) {
               s.spec.power = divisor_of(rng, s.index.n);
               s.spec.hermitian_partner = herm || coin(rng, 0.2);
             }}};
  }
  if (id == "pro3_1_product") {
    return {{Family::commuting_pair, 1, [](Rng& rng, Sample& s) {
               s.spec.power = divisor_of(rng, coin(rng) ? s.index.n : s.index.m);
               s.spec.hermitian_partner = coin(rng, 0.3);
             }}};
  }
  if (id == "pro24_induction" || id == "pro35_induction") {
    return {{Family::a_normal, 2, any},
            {Family::scalar_power, 3, power_dividing(false)},
            {Family::nilpotent_sum, 2, small_nil(2)},
            {Family::scalar_power, 1, [](Rng&, Sample& s) { s.spec.power = 1; }},
            {Family::general_in_ba, 1, any}};
  }
  if (id == "pro25_step" || id == "pro33_step") {
    return {{Family::a_normal, 2, any},
            {Family::scalar_power, 3, power_dividing(false)},
            {Family::nilpotent_sum, 2,
             nilpotent_up_to([](const ClassIndex& i) { return i.n; }, false)},
            {Family::scalar_power, 1, power_dividing(true)},
            {Family::paper_example, 1, two_by_two_example}};
  }
  if (id == "pro26_injective" || id == "pro34_1") {
    return {{Family::scalar_power, 3, power_dividing(false)},
            {Family::a_normal, 2, injective},
            {Family::commuting_with_a, 1, any},
            {Family::paper_example, 1, two_by_two_example}};
  }
  if (id == "pro27_dual") {
    return {{Family::scalar_power, 3, power_dividing(true)},
            {Family::a_normal, 2, any},
            {Family::nilpotent_sum, 2,
             nilpotent_up_to([](const ClassIndex& i) { return i.n; }, false)},
            {Family::paper_example, 1, two_by_two_example}};
  }
  if (id == "pro29_sharp_injective") {
    return {{Family::scalar_power, 3, compose(full_rank, power_dividing(true))},
            {Family::a_normal, 2, compose(full_rank, injective)},
            {Family::paper_example, 1, two_by_two_example}};
  }
  if (id == "th23_partial") {
    return {{Family::nilpotent_sum, 3, partial_iso(false)},
            {Family::nilpotent_sum, 1,
             compose(partial_iso(false), [](Rng&, Sample& s) { s.spec.unimodular = false; })},
            {Family::a_normal, 1, any}};
  }
  if (id == "th31_partial") {
    return {{Family::nilpotent_sum, 3, compose(n_at_least_m, partial_iso(false))},
            {Family::nilpotent_sum, 1,
             compose(n_at_least_m, compose(partial_iso(false), [](Rng&, Sample& s) {
                       s.spec.unimodular = false;
                     }))}};
  }
  if (id == "proAA_fuglede" || id == "corAA_lcm") {
    return {{Family::commuting_with_a, 2,
             [](Rng& rng, Sample& s) { s.spec.power = divisor_of(rng, s.index.n); }},
            {Family::commuting_with_a, 2, [](Rng&, Sample& s) { s.spec.power = 0; }}};
  }
  if (id == "pro34_2") {
    return {{Family::scalar_power, 3, power_dividing(true)},
            {Family::a_normal, 2, injective},
            {Family::commuting_with_a, 1, any},
            {Family::paper_example, 1, two_by_two_example}};
  }
  if (id == "th37_equiv") {
    return {{Family::commuting_with_a, 2, [](Rng&, Sample& s) { s.spec.power = 0; }},
            {Family::commuting_with_a, 2,
             [](Rng& rng, Sample& s) {
               s.spec.power = divisor_of(rng, coin(rng) ? s.index.n : s.index.m);
             }},
            {Family::commuting_with_a, 1,
             [](Rng& rng, Sample& s) { s.spec.power = uniform_int(rng, 1, 5); }}};
  }
  if (id == "th2_2_bcond") {
    return {{Family::commuting_with_a, 3,
             [](Rng& rng, Sample& s) { s.spec.power = divisor_of(rng, s.index.m); }},
            {Family::commuting_with_a, 1, [](Rng&, Sample& s) { s.spec.power = 0; }}};
  }
  return {};
}

bool family_allowed(const SuiteConfig& cfg, Family f) {
  return cfg.families.empty() ||
         std::find(cfg.families.begin(), cfg.families.end(), f) !=
             cfg.families.end();
}

}  // namespace

std::optional<Sample> sample_for(std::string_view check_id, std::uint64_t seed,
                                 const SuiteConfig& cfg) {
  check_info(check_id);
  std::vector<Recipe> options;
  for (auto& r : recipes_for(check_id)) {
    if (!family_allowed(cfg, r.family)) continue;
    if (r.family == Family::paper_example && cfg.dim_min > 2) continue;
    options.push_back(std::move(r));
  }
  if (options.empty()) return std::nullopt;

  Rng rng(splitmix64(seed));
  std::vector<double> weights;
  for (const auto& r : options) weights.push_back(r.weight);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  const Recipe& recipe = options[pick(rng)];

  Sample s;
  s.spec.family = recipe.family;
  s.spec.dim = uniform_int(rng, cfg.dim_min, cfg.dim_max);
  s.spec.metric_rank =
      coin(rng, 0.4) ? s.spec.dim : uniform_int(rng, 1, s.spec.dim - 1);
  s.spec.seed = rng();
  s.index = {uniform_int(rng, 1, cfg.index_max), uniform_int(rng, 1, cfg.index_max)};
  recipe.shape(rng, s);
  return s;
}

SuiteSummary run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  std::vector<std::string> ids = cfg.checks;
  if (ids.empty()) {
    for (const auto& info : registry()) ids.emplace_back(info.id);
  }

  SuiteSummary summary;
  for (const auto& id : ids) {
    RowSummary row;
    row.check_id = id;
    const std::uint64_t base = mix_seed(cfg.seed, id);
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const auto sample = sample_for(id, base + static_cast<std::uint64_t>(trial), cfg);
      if (!sample) break;
      ++row.trials;
      CheckReport report;
      try {
        const DenseInstance inst = generate_dense(sample->spec, cfg.tol);
        report = run_check(id, inst, sample->index);
      } catch (const Error& e) {
        ++row.errors;
        if (row.error_messages.size() < 8) row.error_messages.emplace_back(e.what());
        continue;
      }
      switch (report.premise) {
        case PremiseStatus::satisfied: ++row.satisfied; break;
        case PremiseStatus::vacuous: ++row.vacuous; break;
        case PremiseStatus::indeterminate: ++row.premise_indeterminate; break;
      }
      switch (report.conclusion) {
        case ConclusionStatus::pass: ++row.pass; break;
        case ConclusionStatus::fail:
          ++row.fail;
          row.failures.push_back(std::move(report));
          break;
        case ConclusionStatus::indeterminate: ++row.conclusion_indeterminate; break;
        case ConclusionStatus::not_evaluated: break;
      }
    }
    summary.rows.push_back(std::move(row));
  }
  std::sort(summary.rows.begin(), summary.rows.end(),
            [](const RowSummary& a, const RowSummary& b) { return a.check_id < b.check_id; });
  return summary;
}

}  // namespace anormal::lab
