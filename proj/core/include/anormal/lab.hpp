#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "anormal/classes.hpp"
#include "anormal/semihilbert.hpp"
#include "anormal/shift.hpp"

namespace anormal::lab {

enum class Family {
  general_in_ba,
  a_normal,
  scalar_power,
  commuting_with_a,
  isometry_v,
  paper_example,
  shift,
  nilpotent_sum,
  commuting_pair,
};

std::string_view to_string(Family f);
Family family_from_string(std::string_view name);

/// Recipe for one generated instance. Generation is a pure function of the
/// spec: the same spec always yields bit-identical matrices.
///
/// `power` is overloaded by family:
///   scalar_power      T^power = scalar * I
///   commuting_with_a  exponent of the power-scalar blocks (0 mixes kinds)
///   isometry_v        exponent of the power-scalar blocks of the partner T
///   commuting_pair    exponent of the power-scalar blocks of T
///   nilpotent_sum     nilpotency index of the nilpotent part
struct GeneratorSpec {
  Family family = Family::general_in_ba;
  int dim = 2;
  int metric_rank = 2;
  std::uint64_t seed = 0;
  int power = 1;
  Complex scalar{1.0, 0.0};
  /// scalar_power: draw the scalar on the unit circle instead of using
  /// `scalar`. nilpotent_sum: unimodular normal part.
  bool unimodular = false;
  /// commuting_pair: make S A-selfadjoint rather than merely A-normal.
  bool hermitian_partner = false;
  /// a_normal: keep every eigenvalue away from zero.
  bool injective = false;

  /// Throws Error(invalid_input) for out-of-range fields.
  void validate() const;

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

struct DenseInstance {
  MetricContext ctx;
  BoundOperator t;
  std::optional<BoundOperator> s;  // commuting_pair partner
  std::optional<BoundOperator> v;  // isometry_v isometry
  GeneratorSpec origin;
};

struct ShiftInstance {
  shift::WeightedShiftInstance shift;
  GeneratorSpec origin;
};

using Instance = std::variant<DenseInstance, ShiftInstance>;

Instance generate(const GeneratorSpec& spec, const Tolerance& tol = {});

/// generate() for the dense families; throws Error(infeasible_spec) for
/// Family::shift.
DenseInstance generate_dense(const GeneratorSpec& spec,
                             const Tolerance& tol = {});

/// Wraps user-supplied matrices (T must lie in B_A).
DenseInstance make_instance(const ComplexMatrix& a, const ComplexMatrix& t,
                            const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Registry

enum class PremiseStatus { satisfied, vacuous, indeterminate };
enum class ConclusionStatus { pass, fail, indeterminate, not_evaluated };

std::string_view to_string(PremiseStatus s);
std::string_view to_string(ConclusionStatus s);

struct NamedResidual {
  std::string name;
  double value = 0.0;
};

struct CheckReport {
  std::string check_id;
  ClassIndex index;
  PremiseStatus premise = PremiseStatus::vacuous;
  ConclusionStatus conclusion = ConclusionStatus::not_evaluated;
  /// Generator recipe of the instance, attached when the conclusion fails.
  std::optional<GeneratorSpec> witness;
  std::vector<NamedResidual> residuals;
};

struct CheckInfo {
  std::string_view id;
  std::string_view statement;
  bool needs_partner = false;   // second operator S
  bool needs_isometry = false;  // isometry V
};

const std::vector<CheckInfo>& registry();
const CheckInfo& check_info(std::string_view id);

/// Evaluates the premise and, when it holds, the conclusion of one registry
/// row. Throws Error(unknown_check) for an unknown id and
/// Error(invalid_input) when the instance lacks an operator the row needs.
CheckReport run_check(std::string_view check_id, const DenseInstance& inst,
                      ClassIndex idx);

std::vector<CheckReport> run_check(std::string_view check_id,
                                   const DenseInstance& inst,
                                   std::span<const ClassIndex> indices);

// ---------------------------------------------------------------------------
// Suite

struct SuiteConfig {
  int dim_min = 2;
  int dim_max = 5;
  int index_max = 4;
  int trials = 400;
  std::uint64_t seed = 42;
  Tolerance tol;
  /// Empty means every registry row.
  std::vector<std::string> checks;
  /// Empty means every family a row knows how to use.
  std::vector<Family> families;

  /// Throws Error(invalid_input) on degenerate settings (trials < 1, empty
  /// dimension range, ...).
  void validate() const;
};

struct RowSummary {
  std::string check_id;
  int trials = 0;
  int satisfied = 0;
  int vacuous = 0;
  int premise_indeterminate = 0;
  int pass = 0;
  int fail = 0;
  int conclusion_indeterminate = 0;
  /// Instances that could not be generated or evaluated.
  int errors = 0;
  std::vector<CheckReport> failures;
  std::vector<std::string> error_messages;

  bool vacuous_only() const { return trials > 0 && satisfied == 0; }
  bool skipped() const { return trials == 0; }
};

struct SuiteSummary {
  std::vector<RowSummary> rows;
  bool ok() const;
  int total_failures() const;
};

/// One suite sample: an instance recipe and the index it is checked at.
struct Sample {
  GeneratorSpec spec;
  ClassIndex index;
};

/// Premise-biased sampler for a registry row; std::nullopt when none of the
/// allowed families applies to the row.
std::optional<Sample> sample_for(std::string_view check_id, std::uint64_t seed,
                                 const SuiteConfig& cfg);

SuiteSummary run_suite(const SuiteConfig& cfg);

// ---------------------------------------------------------------------------
// Search

enum class SearchKind { not_normal, not_quasinormal, qn_not_normal };
enum class SearchDomain { dense, shift };

struct SearchTarget {
  SearchKind kind = SearchKind::not_normal;
  ClassIndex index;
  std::string text;
};

/// Parses "not_normal(n,m)", "not_qn(n,m)" or "qn_not_normal(n,m)"; throws
/// Error(unknown_target).
SearchTarget parse_target(std::string_view text);

struct DenseWitness {
  ComplexMatrix metric;
  ComplexMatrix op;
  double normal_residual = 0.0;
  double quasinormal_residual = 0.0;
};

struct ShiftWitness {
  shift::WeightedShiftInstance instance;
  shift::ShiftVerdict normal;
  shift::ShiftVerdict quasinormal;
};

struct SearchResult {
  SearchTarget target;
  SearchDomain domain = SearchDomain::dense;
  bool found = false;
  std::optional<DenseWitness> dense;
  std::optional<ShiftWitness> shift;
  std::int64_t evaluations = 0;
  std::int64_t restarts = 0;
  /// Smallest quasinormal residual seen while the normal residual stayed
  /// above the margin (dense qn_not_normal only).
  std::optional<double> best_objective;
};

/// Randomized search with coordinate descent (dense) or exact enumeration of
/// eventually periodic shifts (shift). Deterministic in the seed. `budget`
/// counts candidate evaluations.
SearchResult search(std::string_view target, SearchDomain domain, int dim,
                    std::int64_t budget, std::uint64_t seed,
                    const Tolerance& tol = {});

}  // namespace anormal::lab
