#include "anormal/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

namespace anormal::io {

namespace {

[[noreturn]] void bad(std::string_view what, const std::string& msg) {
  throw Error(ErrorCode::parse_error, std::string(what) + ": " + msg);
}

const Json& field(const Json& j, const char* key, std::string_view what) {
  if (!j.is_object()) bad(what, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(what, std::string("missing field '") + key + "'");
  return *it;
}

void only_keys(const Json& j, std::initializer_list<std::string_view> keys,
               std::string_view what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      bad(what, "unknown field '" + it.key() + "'");
    }
  }
}

std::int64_t as_int(const Json& j, std::string_view what) {
  if (!j.is_number_integer()) bad(what, "expected an integer");
  return j.get<std::int64_t>();
}

double as_finite(const Json& j, std::string_view what) {
  if (!j.is_number()) bad(what, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(what, "non-finite number");
  return v;
}

void write(std::string& out, const Json& j, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) {
        return e.is_primitive();
      });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::string s(buf);
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      out += s;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::file_not_found,
                "cannot open '" + path.string() + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    bad(what, e.what());
  }
}

std::string dump(const Json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  if (indent >= 0) out += '\n';
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::invalid_input, "sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matrices

ComplexMatrix matrix_from_json(const Json& j) {
  constexpr std::string_view what = "matrix";
  if (!j.is_object()) bad(what, "expected an object");
  only_keys(j, {"rows", "cols", "data"}, what);
  const auto rows = as_int(field(j, "rows", what), what);
  const auto cols = as_int(field(j, "cols", what), what);
  if (rows < 0 || cols < 0) bad(what, "negative shape");
  const Json& data = field(j, "data", what);
  if (!data.is_array()) bad(what, "'data' must be an array");
  if (static_cast<std::int64_t>(data.size()) != rows * cols) {
    std::ostringstream os;
    os << "shape " << rows << "x" << cols << " needs " << rows * cols
       << " entries, found " << data.size();
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
  ComplexMatrix m(rows, cols);
  for (std::int64_t k = 0; k < rows * cols; ++k) {
    const Json& e = data[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2) bad(what, "entries must be [re, im]");
    m(k / cols, k % cols) = Complex(as_finite(e[0], what), as_finite(e[1], what));
  }
  return m;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      data.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    }
  }
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::move(data);
  return j;
}

// ---------------------------------------------------------------------------
// Shifts

namespace {

shift::Rational rational_from_json(const Json& j, std::string_view what) {
  if (j.is_number_integer()) return shift::Rational(j.get<std::int64_t>());
  if (!j.is_array() || j.size() != 2) bad(what, "rationals are [num, den]");
  const auto num = as_int(j[0], what);
  const auto den = as_int(j[1], what);
  return shift::parse_rational(num, den);
}

shift::GaussianRational gaussian_from_json(const Json& j, std::string_view what) {
  if (!j.is_object()) return {rational_from_json(j, what)};
  only_keys(j, {"re", "im"}, what);
  shift::GaussianRational z;
  if (j.contains("re")) z.re = rational_from_json(j["re"], what);
  if (j.contains("im")) z.im = rational_from_json(j["im"], what);
  return z;
}

template <typename V, typename F>
shift::EventuallyPeriodicSequence<V> sequence_from_json(const Json& j,
                                                        std::string_view what,
                                                        F&& parse) {
  if (!j.is_object()) bad(what, "expected {\"preperiod\", \"period\"}");
  only_keys(j, {"preperiod", "period"}, what);
  shift::EventuallyPeriodicSequence<V> s;
  if (j.contains("preperiod")) {
    const Json& pre = j["preperiod"];
    if (!pre.is_array()) bad(what, "'preperiod' must be an array");
    for (const auto& e : pre) s.preperiod.push_back(parse(e, what));
  }
  const Json& per = field(j, "period", what);
  if (!per.is_array() || per.empty()) bad(what, "'period' must be a nonempty array");
  for (const auto& e : per) s.period.push_back(parse(e, what));
  return s;
}

std::int64_t checked_int(const boost::multiprecision::cpp_int& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorCode::invalid_input, "rational component exceeds 64 bits");
  }
  return v.convert_to<std::int64_t>();
}

template <typename V, typename F>
Json sequence_to_json(const shift::EventuallyPeriodicSequence<V>& s, F&& to) {
  Json pre = Json::array();
  for (const auto& v : s.preperiod) pre.push_back(to(v));
  Json per = Json::array();
  for (const auto& v : s.period) per.push_back(to(v));
  Json j;
  j["preperiod"] = std::move(pre);
  j["period"] = std::move(per);
  return j;
}

}  // namespace

Json rational_to_json(const shift::Rational& q) {
  return Json::array({checked_int(boost::multiprecision::numerator(q)),
                      checked_int(boost::multiprecision::denominator(q))});
}

Json gaussian_to_json(const shift::GaussianRational& z) {
  Json j;
  j["re"] = rational_to_json(z.re);
  j["im"] = rational_to_json(z.im);
  return j;
}

shift::WeightedShiftInstance shift_from_json(const Json& j) {
  constexpr std::string_view what = "shift";
  if (!j.is_object()) bad(what, "expected an object");
  only_keys(j, {"weights", "metric"}, what);
  shift::WeightedShiftInstance s;
  s.weights = sequence_from_json<shift::GaussianRational>(
      field(j, "weights", what), "shift weights", gaussian_from_json);
  s.metric = sequence_from_json<shift::Rational>(field(j, "metric", what),
                                                 "shift metric", rational_from_json);
  s.validate();
  return s;
}

Json shift_to_json(const shift::WeightedShiftInstance& s) {
  Json j;
  j["weights"] = sequence_to_json(s.weights, gaussian_to_json);
  j["metric"] = sequence_to_json(s.metric, rational_to_json);
  return j;
}

// ---------------------------------------------------------------------------
// Tolerances, specs, configs

Json tolerance_to_json(const Tolerance& tol) {
  Json j;
  j["rank_cutoff"] = tol.rank_cutoff;
  j["residual_tol"] = tol.residual_tol;
  j["distinctness_margin"] = tol.distinctness_margin;
  return j;
}

Tolerance tolerance_from_json(const Json& j, Tolerance base) {
  constexpr std::string_view what = "tolerances";
  if (!j.is_object()) bad(what, "expected an object");
  only_keys(j, {"rank_cutoff", "residual_tol", "distinctness_margin"}, what);
  if (j.contains("rank_cutoff")) base.rank_cutoff = as_finite(j["rank_cutoff"], what);
  if (j.contains("residual_tol")) base.residual_tol = as_finite(j["residual_tol"], what);
  if (j.contains("distinctness_margin")) {
    base.distinctness_margin = as_finite(j["distinctness_margin"], what);
  }
  base.validate();
  return base;
}

Json spec_to_json(const lab::GeneratorSpec& spec) {
  Json j;
  j["family"] = std::string(lab::to_string(spec.family));
  j["dim"] = spec.dim;
  j["metric_rank"] = spec.metric_rank;
  j["seed"] = spec.seed;
  j["power"] = spec.power;
  j["scalar"] = Json::array({spec.scalar.real(), spec.scalar.imag()});
  j["unimodular"] = spec.unimodular;
  j["hermitian_partner"] = spec.hermitian_partner;
  j["injective"] = spec.injective;
  return j;
}

lab::GeneratorSpec spec_from_json(const Json& j) {
  constexpr std::string_view what = "generator spec";
  if (!j.is_object()) bad(what, "expected an object");
  only_keys(j, {"family", "dim", "metric_rank", "seed", "power", "scalar",
                "unimodular", "hermitian_partner", "injective"},
            what);
  lab::GeneratorSpec s;
  const Json& fam = field(j, "family", what);
  if (!fam.is_string()) bad(what, "'family' must be a string");
  s.family = lab::family_from_string(fam.get<std::string>());
  s.dim = static_cast<int>(as_int(field(j, "dim", what), what));
  s.metric_rank = static_cast<int>(as_int(field(j, "metric_rank", what), what));
  const Json& seed = field(j, "seed", what);
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) bad(what, "bad seed");
  s.seed = seed.get<std::uint64_t>();
  if (j.contains("power")) s.power = static_cast<int>(as_int(j["power"], what));
  if (j.contains("scalar")) {
    const Json& c = j["scalar"];
    if (!c.is_array() || c.size() != 2) bad(what, "'scalar' must be [re, im]");
    s.scalar = Complex(as_finite(c[0], what), as_finite(c[1], what));
  }
  auto flag = [&](const char* key, bool& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_boolean()) bad(what, std::string("'") + key + "' must be boolean");
    out = j[key].get<bool>();
  };
  flag("unimodular", s.unimodular);
  flag("hermitian_partner", s.hermitian_partner);
  flag("injective", s.injective);
  s.validate();
  return s;
}

lab::SuiteConfig suite_config_from_json(const Json& j) {
  constexpr std::string_view what = "config";
  if (!j.is_object()) bad(what, "expected an object");
  only_keys(j, {"dims", "index_max", "trials", "seed", "checks", "families",
                "tolerances"},
            what);
  lab::SuiteConfig cfg;
  if (j.contains("dims")) {
    const Json& d = j["dims"];
    if (!d.is_array() || d.size() != 2) bad(what, "'dims' must be [lo, hi]");
    cfg.dim_min = static_cast<int>(as_int(d[0], what));
    cfg.dim_max = static_cast<int>(as_int(d[1], what));
  }
  if (j.contains("index_max")) cfg.index_max = static_cast<int>(as_int(j["index_max"], what));
  if (j.contains("trials")) cfg.trials = static_cast<int>(as_int(j["trials"], what));
  if (j.contains("seed")) {
    const Json& seed = j["seed"];
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) bad(what, "bad seed");
    cfg.seed = seed.get<std::uint64_t>();
  }
  auto strings = [&](const char* key) {
    std::vector<std::string> out;
    const Json& arr = j[key];
    if (!arr.is_array()) bad(what, std::string("'") + key + "' must be an array");
    for (const auto& e : arr) {
      if (!e.is_string()) bad(what, std::string("'") + key + "' holds strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  };
  if (j.contains("checks")) cfg.checks = strings("checks");
  if (j.contains("families")) {
    for (const auto& name : strings("families")) {
      cfg.families.push_back(lab::family_from_string(name));
    }
  }
  if (j.contains("tolerances")) cfg.tol = tolerance_from_json(j["tolerances"]);
  cfg.validate();
  return cfg;
}

Json suite_config_to_json(const lab::SuiteConfig& cfg) {
  Json j;
  j["dims"] = Json::array({cfg.dim_min, cfg.dim_max});
  j["index_max"] = cfg.index_max;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["checks"] = cfg.checks;
  Json fams = Json::array();
  for (auto f : cfg.families) fams.push_back(std::string(lab::to_string(f)));
  j["families"] = std::move(fams);
  j["tolerances"] = tolerance_to_json(cfg.tol);
  return j;
}

// ---------------------------------------------------------------------------
// Reports

Json verdict_to_json(const ClassVerdict& v) {
  Json j;
  j["predicate"] = v.predicate;
  if (v.index) j["index"] = Json::array({v.index->n, v.index->m});
  j["verdict"] = std::string(to_string(v.verdict));
  j["residual"] = v.residual;
  j["tolerances"] = tolerance_to_json(v.tolerances);
  return j;
}

Json check_report_to_json(const lab::CheckReport& r) {
  Json j;
  j["check_id"] = r.check_id;
  j["index"] = Json::array({r.index.n, r.index.m});
  j["premise"] = std::string(lab::to_string(r.premise));
  j["conclusion"] = std::string(lab::to_string(r.conclusion));
  if (r.witness) j["witness"] = spec_to_json(*r.witness);
  Json res = Json::object();
  for (const auto& n : r.residuals) res[n.name] = n.value;
  j["residuals"] = std::move(res);
  return j;
}

Json suite_summary_to_json(const lab::SuiteSummary& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    Json j;
    j["check_id"] = r.check_id;
    j["trials"] = r.trials;
    j["premise_satisfied"] = r.satisfied;
    j["premise_vacuous"] = r.vacuous;
    j["premise_indeterminate"] = r.premise_indeterminate;
    j["conclusion_pass"] = r.pass;
    j["conclusion_fail"] = r.fail;
    j["conclusion_indeterminate"] = r.conclusion_indeterminate;
    j["errors"] = r.errors;
    j["status"] = r.skipped()        ? "skipped"
                  : r.fail > 0       ? "fail"
                  : r.errors > 0     ? "error"
                  : r.vacuous_only() ? "vacuous_only"
                                     : "ok";
    Json fails = Json::array();
    for (const auto& f : r.failures) fails.push_back(check_report_to_json(f));
    j["failures"] = std::move(fails);
    if (!r.error_messages.empty()) j["error_messages"] = r.error_messages;
    rows.push_back(std::move(j));
  }
  Json j;
  j["ok"] = s.ok();
  j["total_failures"] = s.total_failures();
  j["rows"] = std::move(rows);
  return j;
}

Json shift_verdict_to_json(const shift::ShiftVerdict& v) {
  Json j;
  j["class"] = v.which == shift::ShiftClass::normal ? "normal" : "quasinormal";
  j["index"] = Json::array({v.index.n, v.index.m});
  j["verdict"] = v.passed ? "pass" : "fail";
  j["exact"] = true;
  j["window"] = v.window;
  if (v.witness_k) {
    j["witness_k"] = *v.witness_k;
    j["lhs"] = gaussian_to_json(v.lhs);
    j["rhs"] = gaussian_to_json(v.rhs);
  }
  return j;
}

Json search_result_to_json(const lab::SearchResult& r) {
  Json j;
  j["target"] = r.target.text;
  j["domain"] = r.domain == lab::SearchDomain::dense ? "dense" : "shift";
  j["outcome"] = r.found ? "witness" : "exhausted";
  j["evaluations"] = r.evaluations;
  j["restarts"] = r.restarts;
  if (r.best_objective) j["best_quasinormal_residual"] = *r.best_objective;
  if (r.dense) {
    Json w;
    w["metric"] = matrix_to_json(r.dense->metric);
    w["operator"] = matrix_to_json(r.dense->op);
    w["normal_residual"] = r.dense->normal_residual;
    w["quasinormal_residual"] = r.dense->quasinormal_residual;
    j["witness"] = std::move(w);
  }
  if (r.shift) {
    Json w;
    w["shift"] = shift_to_json(r.shift->instance);
    w["normal"] = shift_verdict_to_json(r.shift->normal);
    w["quasinormal"] = shift_verdict_to_json(r.shift->quasinormal);
    j["witness"] = std::move(w);
  }
  return j;
}

}  // namespace anormal::io
