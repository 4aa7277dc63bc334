#include "vocheck/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace vocheck {

namespace {

// Minimal JSON emitter with insertion-ordered keys and fixed number formatting,
// so identical runs produce byte-identical documents.
class JsonWriter {
 public:
  std::string str() && { return std::move(out_); }

  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(const std::string& name) {
    comma();
    out_ += quote(name) + ": ";
    just_keyed_ = true;
  }

  void value(const std::string& s) { raw(quote(s)); }
  void value(const char* s) { raw(quote(s)); }
  void value(double d) { raw(format_double(d)); }
  void value(int i) { raw(std::to_string(i)); }
  void value(std::size_t i) { raw(std::to_string(i)); }
  void value(bool b) { raw(b ? "true" : "false"); }
  void null() { raw("null"); }

  template <typename T>
  void kv(const std::string& name, const T& v) {
    key(name);
    value(v);
  }

 private:
  static std::string quote(const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      switch (c) {
        case '"': q += "\\\""; break;
        case '\\': q += "\\\\"; break;
        case '\n': q += "\\n"; break;
        case '\t': q += "\\t"; break;
        default: q += c;
      }
    }
    return q + "\"";
  }

  void open(char c) {
    comma();
    out_ += c;
    stack_.push_back(false);
    just_keyed_ = false;
  }

  void close(char c) {
    out_ += c;
    stack_.pop_back();
    if (!stack_.empty()) stack_.back() = true;
  }

  void comma() {
    if (just_keyed_) return;
    if (!stack_.empty() && stack_.back()) out_ += ", ";
    if (!stack_.empty()) stack_.back() = true;
  }

  void raw(const std::string& s) {
    comma();
    out_ += s;
    just_keyed_ = false;
  }

  std::string out_;
  std::vector<bool> stack_;
  bool just_keyed_ = false;
};

void write_double_array(JsonWriter& w, const std::string& name, const std::vector<double>& v) {
  w.key(name);
  w.begin_array();
  for (double x : v) w.value(x);
  w.end_array();
}

void write_statement(JsonWriter& w, const StatementReport& r) {
  w.begin_object();
  w.kv("statement", to_string(r.statement));
  w.kv("min_slack", r.min_slack);
  w.key("argmin");
  w.begin_object();
  w.kv("x_index", r.argmin.x_index);
  w.kv("vprime_index", r.argmin.v_index);
  w.kv("grid_index", r.argmin.grid_index);
  w.key("t_or_lambda");
  if (r.argmin.grid_index >= 0)
    w.value(r.argmin.grid_value);
  else
    w.null();
  w.end_object();
  w.kv("samples_evaluated", r.samples_evaluated);
  w.kv("tolerance", r.tolerance);
  w.kv("verdict", to_string(r.verdict));
  w.key("rows");
  w.begin_array();
  for (const SlackRow& row : r.rows) {
    w.begin_object();
    w.key("t_or_lambda");
    if (row.grid_index >= 0)
      w.value(row.grid_value);
    else
      w.null();
    w.kv("x_index", row.x_index);
    w.kv("vprime_index", row.v_index);
    w.kv("slack", row.slack);
    w.kv("verdict", to_string(verdict_for(row.slack, r.tolerance)));
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

RunConfig parse_run_config(const nlohmann::json& doc) {
  RunConfig config;
  if (!doc.is_object()) throw UsageError("config: document must be a JSON object");
  if (!doc.contains("scenario") || !doc["scenario"].is_string())
    throw UsageError("config: missing scenario name");
  config.scenario = doc["scenario"].get<std::string>();
  if (doc.contains("params")) config.params = doc["params"];
  if (doc.contains("t_grid")) config.t_grid = doc["t_grid"].get<std::vector<double>>();
  if (doc.contains("lambda_grid"))
    config.lambda_grid = doc["lambda_grid"].get<std::vector<double>>();
  if (doc.contains("tol")) config.tol = doc["tol"].get<double>();
  if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("out_dir")) config.out_dir = doc["out_dir"].get<std::string>();
  if (doc.contains("formats"))
    config.formats = doc["formats"].get<std::vector<std::string>>();
  for (const std::string& f : config.formats)
    if (f != "json" && f != "csv") throw UsageError("config: unknown format '" + f + "'");
  if (doc.contains("corollary")) {
    const auto& c = doc["corollary"];
    CorollaryConstants k;
    k.m = c.value("M", 1.0);
    k.omega = c.value("omega", 0.0);
    k.c1 = c.value("C1", 1.0);
    k.c2 = c.value("C2", 1.0);
    k.c3 = c.value("C3", 1.0);
    config.corollary = k;
  }
  if (doc.contains("tol") && !(config.tol > 0.0))
    throw UsageError("config: tol must be > 0");
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config file not found: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config parse error: ") + e.what());
  }
  return parse_run_config(doc);
}

std::string render_report_json(const RunConfig& config, const RunOutcome& outcome,
                               const std::string& timestamp) {
  JsonWriter w;
  w.begin_object();
  w.key("tool");
  w.begin_object();
  w.kv("name", kToolName);
  w.kv("version", kToolVersion);
  w.end_object();
  w.kv("timestamp", timestamp);

  w.key("config");
  w.begin_object();
  w.kv("scenario", config.scenario);
  w.kv("seed", std::size_t(config.seed));
  w.kv("tol", outcome.tol);
  write_double_array(w, "t_grid", outcome.t_grid);
  write_double_array(w, "lambda_grid", outcome.lambda_grid);
  w.key("formats");
  w.begin_array();
  for (const std::string& f : config.formats) w.value(f);
  w.end_array();
  w.end_object();

  w.key("scenario");
  w.begin_object();
  w.kv("label", outcome.scenario_label);
  w.kv("dimension", outcome.dimension);
  w.end_object();

  w.key("hypothesis");
  w.begin_object();
  w.kv("pass", outcome.hypothesis.pass);
  w.key("items");
  w.begin_array();
  for (const auto& item : outcome.hypothesis.items) {
    w.begin_object();
    w.kv("name", item.name);
    w.kv("pass", item.pass);
    w.kv("value", item.value);
    w.end_object();
  }
  w.end_array();
  w.end_object();

  w.key("statements");
  w.begin_array();
  for (const StatementReport& r : outcome.statements) write_statement(w, r);
  w.end_array();

  if (outcome.has_equivalence) {
    w.key("equivalence");
    w.begin_object();
    w.kv("agreement", outcome.agreement);
    w.key("notes");
    w.begin_array();
    for (const std::string& n : outcome.notes) w.value(n);
    w.end_array();
    w.end_object();
  }

  w.key("extras");
  w.begin_object();
  for (const auto* inv : {&outcome.invariance_k, &outcome.invariance_l}) {
    if (!inv->has_value()) continue;
    const ConeInvarianceReport& r = inv->value();
    w.key(std::string("cone_invariance_") + r.which);
    w.begin_object();
    w.kv("semigroup_family_pass", r.semigroup_family_pass);
    w.kv("semigroup_worst_distance", r.semigroup_worst_distance);
    w.kv("resolvent_family_pass", r.resolvent_family_pass);
    w.kv("resolvent_worst_distance", r.resolvent_worst_distance);
    w.kv("pass", r.pass);
    w.end_object();
  }
  if (outcome.voc_identity) {
    w.key("voc_identity");
    w.begin_object();
    w.kv("max_residual", outcome.voc_identity->max_residual);
    w.kv("worst_t", outcome.voc_identity->worst_t);
    w.kv("tol", outcome.voc_identity->tol);
    w.kv("pass", outcome.voc_identity->pass);
    w.end_object();
  }
  if (outcome.strong_inequality) {
    w.key("strong_inequality");
    w.begin_object();
    w.kv("min_slack", outcome.strong_inequality->min_slack);
    w.kv("worst_t", outcome.strong_inequality->worst_t);
    w.kv("x_index", outcome.strong_inequality->x_index);
    w.kv("coordinate", outcome.strong_inequality->coordinate);
    w.kv("tolerance", outcome.strong_inequality->tolerance);
    w.kv("pass", outcome.strong_inequality->pass);
    w.end_object();
  }
  if (outcome.extra_assumption) {
    w.key("extra_assumption");
    w.begin_object();
    w.kv("min_slack", outcome.extra_assumption->min_slack);
    w.kv("worst_s", outcome.extra_assumption->worst_s);
    w.kv("worst_t", outcome.extra_assumption->worst_t);
    w.kv("tolerance", outcome.extra_assumption->tolerance);
    w.kv("verdict", to_string(outcome.extra_assumption->verdict));
    w.end_object();
  }
  w.end_object();

  w.key("errors");
  w.begin_array();
  for (const std::string& e : outcome.errors) w.value(e);
  w.end_array();

  w.kv("exit_code", outcome.exit_code);
  w.end_object();
  std::string text = std::move(w).str();
  text += "\n";
  return text;
}

std::string render_report_csv(const RunOutcome& outcome) {
  std::string out = "statement,t_or_lambda,x_index,vprime_index,slack,verdict\n";
  for (const StatementReport& r : outcome.statements)
    for (const SlackRow& row : r.rows) {
      out += to_string(r.statement);
      out += ',';
      if (row.grid_index >= 0) out += format_double(row.grid_value);
      out += ',';
      out += std::to_string(row.x_index);
      out += ',';
      out += std::to_string(row.v_index);
      out += ',';
      out += format_double(row.slack);
      out += ',';
      out += to_string(verdict_for(row.slack, r.tolerance));
      out += '\n';
    }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out << content;
    if (!out.good()) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("rename failed for " + target.string() + ": " + ec.message());
}

}  // namespace vocheck
