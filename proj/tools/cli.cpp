#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "anormal/io.hpp"

namespace anormal::cli {

namespace {

using io::Json;

struct CommonFlags {
  std::optional<double> tol_residual;
  std::optional<double> tol_rank;
  std::optional<double> margin;
  std::string out_path;

  Tolerance tolerance(Tolerance base = {}) const {
    if (tol_residual) base.residual_tol = *tol_residual;
    if (tol_rank) base.rank_cutoff = *tol_rank;
    if (margin) base.distinctness_margin = *margin;
    base.validate();
    return base;
  }
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--tol-residual", f.tol_residual, "pass threshold for residuals");
  cmd->add_option("--tol-rank", f.tol_rank, "relative singular value cutoff");
  cmd->add_option("--margin", f.margin, "fail threshold for residuals");
  cmd->add_option("--out", f.out_path, "write the report here instead of stdout");
}

Json report_header(std::string_view command) {
  Json j;
  j["tool"] = {{"name", "anormal"}, {"version", ANORMAL_VERSION}};
  j["command"] = command;
  j["inputs"] = Json::array();
  return j;
}

void add_input(Json& report, std::string_view role, const std::string& path,
               const std::string& bytes) {
  report["inputs"].push_back(
      {{"role", role}, {"path", path}, {"sha256", io::sha256_hex(bytes)}});
}

void emit(const Json& report, const CommonFlags& flags, std::ostream& out) {
  const std::string text = io::dump(report);
  if (flags.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(flags.out_path, std::ios::binary);
  if (!f) {
    throw Error(ErrorCode::file_not_found,
                "cannot write '" + flags.out_path + "'");
  }
  f << text;
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyArgs {
  std::string metric_path;
  std::string operator_path;
  std::string shift_path;
  int n = 1;
  int m = 1;
  bool force = false;
  bool exact = false;
  CommonFlags common;
};

Json membership_json(const MembershipVerdict& mv) {
  Json j;
  j["in_B^A"] = std::string(to_string(mv.in_b_upper_a));
  j["in_B_A"] = std::string(to_string(mv.in_b_a));
  j["residual_B^A"] = mv.residual_b_upper_a;
  j["residual_B_A"] = mv.residual_b_a;
  if (mv.bound_constant) j["seminorm"] = *mv.bound_constant;
  j["note"] = kFiniteDimensionMembershipNote;
  return j;
}

int classify_dense(const ClassifyArgs& a, std::ostream& out) {
  const Tolerance tol = a.common.tolerance();
  const ClassIndex idx{a.n, a.m};
  idx.validate();

  Json report = report_header("classify");
  const std::string a_bytes = io::read_file(a.metric_path);
  const std::string t_bytes = io::read_file(a.operator_path);
  add_input(report, "metric", a.metric_path, a_bytes);
  add_input(report, "operator", a.operator_path, t_bytes);
  const ComplexMatrix am = io::matrix_from_json(io::parse_json(a_bytes, a.metric_path));
  const ComplexMatrix tm = io::matrix_from_json(io::parse_json(t_bytes, a.operator_path));
  report["tolerances"] = io::tolerance_to_json(tol);
  report["index"] = Json::array({idx.n, idx.m});

  const MetricContext ctx = make_context(am, tol);
  const MembershipVerdict mv = membership(ctx, tm);
  report["membership"] = membership_json(mv);
  if (mv.in_b_a != Verdict::pass) {
    if (!a.force) {
      std::ostringstream os;
      os << "operator is not in B_A: (I - P) T^* A residual " << mv.residual_b_a
         << " (" << to_string(mv.in_b_a)
         << "); T must map N(A) into N(A). Use --force to report this as the result";
      throw Error(ErrorCode::not_in_b_a, os.str());
    }
    report["exit_status"] = static_cast<int>(kOk);
    emit(report, a.common, out);
    return kOk;
  }

  const BoundOperator t = a_adjoint(ctx, tm);
  report["t_sharp"] = io::matrix_to_json(t.sharp());
  Json basic = Json::array();
  for (const auto& v : basic_class_predicates(t)) basic.push_back(io::verdict_to_json(v));
  report["basic"] = std::move(basic);
  report["classes"] = Json::array({io::verdict_to_json(nm_normal_residual(t, idx)),
                                   io::verdict_to_json(nm_quasinormal_residual(t, idx))});
  report["exit_status"] = static_cast<int>(kOk);
  emit(report, a.common, out);
  return kOk;
}

// Dense residual of the class identity on the columns e_1..e_K that the
// truncation does not reach.
double interior_residual(const shift::FiniteSection& f, const MetricContext& ctx,
                         ClassIndex idx, bool quasi, Eigen::Index interior) {
  const BoundOperator t = a_adjoint(ctx, f.t);
  const ComplexMatrix tn = matrix_power(t.op(), idx.n);
  ComplexMatrix right = sharp_power(t, idx.m);
  double scale = std::pow(spectral_norm(t.op()), idx.n) *
                 std::pow(t.sharp_norm(), idx.m);
  if (quasi) {
    right = right * t.op();
    scale *= spectral_norm(t.op());
  }
  const ComplexMatrix c = commutator(tn, right);
  return scaled_residual(c.leftCols(interior), scale);
}

int classify_shift(const ClassifyArgs& a, std::ostream& out) {
  const Tolerance tol = a.common.tolerance();
  const ClassIndex idx{a.n, a.m};
  idx.validate();
  Json report = report_header("classify");
  const std::string bytes = io::read_file(a.shift_path);
  add_input(report, "shift", a.shift_path, bytes);
  const auto s = io::shift_from_json(io::parse_json(bytes, a.shift_path));
  report["index"] = Json::array({idx.n, idx.m});

  if (a.exact) {
    report["path"] = "exact";
    report["classes"] = Json::array(
        {io::shift_verdict_to_json(shift::shift_class_check(s, idx, shift::ShiftClass::normal)),
         io::shift_verdict_to_json(
             shift::shift_class_check(s, idx, shift::ShiftClass::quasinormal))});
  } else {
    report["path"] = "finite_section";
    report["tolerances"] = io::tolerance_to_json(tol);
    const std::int64_t margin = idx.n + idx.m + 2;
    const std::int64_t size = shift::decision_window(s, idx) + margin;
    const auto f = shift::finite_section(s, size);
    const MetricContext ctx = make_context(f.a, tol);
    report["section_size"] = size;
    report["interior_columns"] = size - margin;
    Json classes = Json::array();
    for (bool quasi : {false, true}) {
      ClassVerdict v;
      v.predicate = quasi ? "nm_quasinormal" : "nm_normal";
      v.index = idx;
      v.residual = interior_residual(f, ctx, idx, quasi, size - margin);
      v.verdict = tol.classify(v.residual);
      v.tolerances = tol;
      classes.push_back(io::verdict_to_json(v));
    }
    report["classes"] = std::move(classes);
  }
  report["exit_status"] = static_cast<int>(kOk);
  emit(report, a.common, out);
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

int verify(const std::string& config_path, const CommonFlags& common,
           std::ostream& out, std::ostream& err) {
  Json report = report_header("verify");
  const std::string bytes = io::read_file(config_path);
  add_input(report, "config", config_path, bytes);
  lab::SuiteConfig cfg = io::suite_config_from_json(io::parse_json(bytes, config_path));
  cfg.tol = common.tolerance(cfg.tol);
  report["config"] = io::suite_config_to_json(cfg);
  report["tolerances"] = io::tolerance_to_json(cfg.tol);

  const lab::SuiteSummary summary = lab::run_suite(cfg);
  report["summary"] = io::suite_summary_to_json(summary);
  const int code = summary.ok() ? kOk : kInternal;
  report["exit_status"] = code;

  for (const auto& row : summary.rows) {
    err << std::left << std::setw(24) << row.check_id << " trials " << std::setw(5)
        << row.trials << " satisfied " << std::setw(5) << row.satisfied
        << " pass " << std::setw(5) << row.pass << " fail " << std::setw(3)
        << row.fail << " indet " << row.conclusion_indeterminate
        << (row.vacuous_only() ? "  VACUOUS-ONLY" : "")
        << (row.errors ? "  ERRORS" : "") << '\n';
  }
  emit(report, common, out);
  return code;
}

// ---------------------------------------------------------------------------
// search

struct SearchArgs {
  std::string target;
  int dim = 2;
  std::int64_t budget = 10000;
  std::uint64_t seed = 42;
  std::string domain = "dense";
  std::string witness_path = "witness.json";
  CommonFlags common;
};

int search(const SearchArgs& a, std::ostream& out) {
  const Tolerance tol = a.common.tolerance();
  const auto domain = a.domain == "shift" ? lab::SearchDomain::shift
                                          : lab::SearchDomain::dense;
  Json report = report_header("search");
  report["tolerances"] = io::tolerance_to_json(tol);
  report["parameters"] = {{"target", a.target}, {"dim", a.dim},
                          {"budget", a.budget}, {"seed", a.seed},
                          {"domain", a.domain}};
  const lab::SearchResult r = lab::search(a.target, domain, a.dim, a.budget, a.seed, tol);
  report["result"] = io::search_result_to_json(r);
  const int code = r.found ? kOk : kExhausted;
  if (r.found) {
    Json witness = r.dense ? Json{{"metric", io::matrix_to_json(r.dense->metric)},
                                  {"operator", io::matrix_to_json(r.dense->op)}}
                           : Json{{"shift", io::shift_to_json(r.shift->instance)}};
    std::ofstream f(a.witness_path, std::ios::binary);
    if (!f) {
      throw Error(ErrorCode::file_not_found, "cannot write '" + a.witness_path + "'");
    }
    f << io::dump(witness);
    report["witness_path"] = a.witness_path;
  }
  report["exit_status"] = code;
  emit(report, a.common, out);
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Classify operators on semi-Hilbertian spaces, check the "
               "identity registry and search for witnesses."};
  app.name("anormal");
  app.set_version_flag("--version", std::string(ANORMAL_VERSION));
  app.require_subcommand(1);

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "classify a matrix pair or a shift");
  auto* metric_opt = classify->add_option("--metric", ca.metric_path, "metric A (matrix JSON)");
  auto* op_opt = classify->add_option("--operator", ca.operator_path, "operator T (matrix JSON)");
  auto* shift_opt = classify->add_option("--shift", ca.shift_path, "weighted shift (shift JSON)");
  metric_opt->needs(op_opt);
  op_opt->needs(metric_opt);
  shift_opt->excludes(metric_opt)->excludes(op_opt);
  classify->add_option("--n", ca.n, "power of T")->check(CLI::PositiveNumber);
  classify->add_option("--m", ca.m, "power of the A-adjoint")->check(CLI::PositiveNumber);
  classify->add_flag("--force", ca.force, "report a failed membership instead of exiting 2");
  classify->add_flag("--exact", ca.exact, "decide shift inputs exactly");
  add_common(classify, ca.common);

  std::string config_path;
  CommonFlags verify_flags;
  auto* verify_cmd = app.add_subcommand("verify", "run the check registry suite");
  verify_cmd->add_option("--config", config_path, "suite configuration JSON")->required();
  add_common(verify_cmd, verify_flags);

  SearchArgs sa;
  auto* search_cmd = app.add_subcommand("search", "search for a witness");
  search_cmd->add_option("--target", sa.target,
                         "not_normal(n,m), not_qn(n,m) or qn_not_normal(n,m)")
      ->required();
  search_cmd->add_option("--dim", sa.dim, "dimension of dense candidates");
  search_cmd->add_option("--budget", sa.budget, "number of candidate evaluations");
  search_cmd->add_option("--seed", sa.seed, "random seed");
  search_cmd->add_option("--domain", sa.domain, "dense or shift")
      ->check(CLI::IsMember({"dense", "shift"}));
  search_cmd->add_option("--witness", sa.witness_path, "where to write a found witness");
  add_common(search_cmd, sa.common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (classify->parsed()) {
      if (!ca.shift_path.empty()) return classify_shift(ca, out);
      if (ca.metric_path.empty()) {
        throw Error(ErrorCode::invalid_input, "classify needs --metric and --operator, or --shift");
      }
      return classify_dense(ca, out);
    }
    if (verify_cmd->parsed()) return verify(config_path, verify_flags, out, err);
    return search(sa, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace anormal::cli
