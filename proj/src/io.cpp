#include "chaffkit/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace chaffkit {

namespace {

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

template <class F>
void for_each_json_line(const std::filesystem::path& path, F&& fn) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(where(path, n) + ": invalid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw InputError(where(path, n) + ": expected a JSON object");
    try {
      fn(j, n);
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      throw InputError(where(path, n) + ": " + e.what());
    }
  }
}

std::string str_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw std::invalid_argument(std::string("missing string field \"") + key + "\"");
  return j[key].get<std::string>();
}

Example example_field(const json& j) {
  auto parsed = parse_example_line(str_field(j, "example"));
  if (auto* err = std::get_if<ParseError>(&parsed))
    throw std::invalid_argument("unparseable example (" + std::string(parse_error_name(err->kind)) + ": " +
                                err->message + ")");
  return std::get<Example>(std::move(parsed));
}

std::string dash_if_empty(const std::optional<std::string>& s) { return s && !s->empty() ? *s : "-"; }

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Submission> read_submissions(const std::filesystem::path& path) {
  std::vector<Submission> out;
  for_each_json_line(path, [&](const json& j, std::size_t) {
    Submission s{str_field(j, "student_id"), str_field(j, "timestamp"), str_field(j, "suite")};
    if (s.student_id.empty()) throw std::invalid_argument("empty student_id");
    out.push_back(std::move(s));
  });
  return out;
}

void write_submissions(std::ostream& out, const std::vector<Submission>& subs) {
  for (const auto& s : subs)
    out << json{{"student_id", s.student_id}, {"timestamp", s.timestamp}, {"suite", s.suite_text}}.dump() << "\n";
}

void write_wfes(std::ostream& out, const std::vector<WfeRecord>& wfes) {
  for (const auto& w : wfes) {
    json j = {{"wfe_id", w.wfe_id},
              {"student_id", w.student_id},
              {"timestamp", w.timestamp},
              {"example", w.example.raw_text.empty() ? render_example(w.example) : w.example.raw_text},
              {"failed_wheats", w.failed_wheats}};
    out << j.dump() << "\n";
  }
}

std::vector<WfeRecord> read_wfes(const std::filesystem::path& path) {
  std::vector<WfeRecord> out;
  for_each_json_line(path, [&](const json& j, std::size_t) {
    WfeRecord r;
    r.wfe_id = str_field(j, "wfe_id");
    r.student_id = str_field(j, "student_id");
    r.timestamp = j.contains("timestamp") && j["timestamp"].is_string() ? j["timestamp"].get<std::string>() : "";
    r.example = example_field(j);
    if (j.contains("failed_wheats")) r.failed_wheats = j["failed_wheats"].get<std::vector<std::string>>();
    out.push_back(std::move(r));
  });
  return out;
}

void write_vectors(std::ostream& out, const std::vector<WfeRecord>& wfes, const std::vector<FeaturedWfe>& featured) {
  for (std::size_t i = 0; i < featured.size(); ++i) {
    const auto& w = wfes.at(i);
    json j = {{"wfe_id", featured[i].wfe_id},
              {"student_id", featured[i].student_id},
              {"example", w.example.raw_text.empty() ? render_example(w.example) : w.example.raw_text},
              {"vector", featured[i].vector.to_string()}};
    out << j.dump() << "\n";
  }
}

std::vector<VectorRecord> read_vectors(const std::filesystem::path& path, std::optional<std::size_t> expected_len) {
  std::vector<VectorRecord> out;
  for_each_json_line(path, [&](const json& j, std::size_t) {
    VectorRecord r;
    r.wfe_id = str_field(j, "wfe_id");
    r.student_id = str_field(j, "student_id");
    r.example = j.contains("example") && j["example"].is_string() ? j["example"].get<std::string>() : "";
    auto fv = FeatureVector::parse(str_field(j, "vector"));
    if (!fv) throw std::invalid_argument("vector must contain only 'm', 'd' and spaces");
    if (expected_len && fv->size() != *expected_len)
      throw std::invalid_argument("vector has " + std::to_string(fv->size()) + " bits, problem has " +
                                  std::to_string(*expected_len) + " mutants");
    r.vector = *fv;
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<FeaturedWfe> to_featured(const std::vector<VectorRecord>& records) {
  std::vector<FeaturedWfe> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r.wfe_id, r.student_id, r.vector});
  return out;
}

json clusters_to_json(const std::vector<Cluster>& clusters, const ProblemSpec& problem, std::size_t total_wfes) {
  const SplitReport split = split_report(clusters);
  json j;
  j["problem"] = problem.name;
  j["problem_hash"] = problem_hash(problem);
  j["family"] = json::array();
  for (const auto& m : problem.mutant_family) j["family"].push_back(m.id);
  j["total_wfes"] = total_wfes;
  j["all_d_fraction"] = split.all_d_fraction;
  j["clusters"] = json::array();
  for (const auto& c : clusters) {
    json cj = {{"id", c.id()},
               {"size", c.size()},
               {"distinct_students", c.distinct_students},
               {"vector", c.vector.to_string()},
               {"category", std::string(category_name(c.category))},
               {"candidate_description", c.candidate_description ? json(*c.candidate_description) : json(nullptr)}};
    cj["members"] = json::array();
    cj["member_students"] = json::array();
    for (const auto& m : c.members) {
      cj["members"].push_back(m.wfe_id);
      cj["member_students"].push_back(m.student_id);
    }
    j["clusters"].push_back(std::move(cj));
  }
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_clusters_csv(std::ostream& out, const std::vector<Cluster>& clusters) {
  out << "size,distinct_students,vector,category,candidate_description,members\n";
  for (const auto& c : clusters) {
    std::string members;
    for (std::size_t i = 0; i < c.members.size(); ++i) members += (i ? " " : "") + c.members[i].wfe_id;
    out << c.size() << "," << c.distinct_students << "," << c.vector.to_string() << "," << category_name(c.category)
        << "," << csv_field(c.candidate_description.value_or("")) << "," << members << "\n";
  }
}

std::vector<Cluster> read_clusters(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
  if (!j.contains("clusters") || !j["clusters"].is_array()) throw InputError(path.string() + ": missing \"clusters\"");
  std::vector<Cluster> out;
  for (const auto& cj : j["clusters"]) {
    Cluster c;
    auto fv = FeatureVector::parse(cj.value("vector", ""));
    if (!fv) throw InputError(path.string() + ": bad cluster vector");
    c.vector = *fv;
    c.category = categorize(c.vector);
    const auto members = cj.value("members", std::vector<std::string>{});
    const auto students = cj.value("member_students", std::vector<std::string>{});
    for (std::size_t i = 0; i < members.size(); ++i)
      c.members.push_back({members[i], i < students.size() ? students[i] : ""});
    c.distinct_students = cj.value("distinct_students", std::size_t{0});
    if (cj.contains("candidate_description") && cj["candidate_description"].is_string())
      c.candidate_description = cj["candidate_description"].get<std::string>();
    out.push_back(std::move(c));
  }
  return out;
}

std::string render_cluster_table(const std::vector<Cluster>& ranked, std::size_t top, std::size_t total_wfes) {
  std::ostringstream out;
  std::size_t width = 14;
  for (std::size_t i = 0; i < ranked.size() && i < top; ++i) width = std::max(width, ranked[i].vector.to_string().size());
  out << std::left << std::setw(8) << "Size" << std::setw(static_cast<int>(width) + 2) << "Feature Vector"
      << "Candidate Description\n";
  for (std::size_t i = 0; i < ranked.size() && i < top; ++i) {
    const auto& c = ranked[i];
    out << std::left << std::setw(8) << c.size() << std::setw(static_cast<int>(width) + 2) << c.vector.to_string()
        << dash_if_empty(c.candidate_description) << "\n";
  }
  const SplitReport split = split_report(ranked);
  out << "\n" << ranked.size() << " clusters over " << total_wfes << " WFEs\n";
  out << std::fixed << std::setprecision(1) << "all-d: " << split.all_d_size << " WFEs (" << split.all_d_fraction * 100
      << "%); at least one m: " << split.total - split.all_d_size << " WFEs (" << (1 - split.all_d_fraction) * 100
      << "%)\n";
  return out.str();
}

json suite_to_json(const ChaffSuite& suite, const ProblemSpec& problem) {
  json j;
  j["problem"] = suite.problem;
  j["chaffs"] = json::array();
  for (const auto& c : suite.chaffs) {
    const Implementation* m = problem.find_mutant(c.mutant_id);
    j["chaffs"].push_back({{"id", c.mutant_id},
                           {"characteristic", m ? m->characteristic_id.value_or("") : ""},
                           {"explanation", m ? m->explanation : ""},
                           {"provenance", c.provenance}});
  }
  if (!suite.warnings.empty()) j["warnings"] = suite.warnings;
  return j;
}

ChaffSuite read_suite(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
  ChaffSuite s;
  if (!j.is_object() || !j.contains("chaffs") || !j["chaffs"].is_array())
    throw InputError(path.string() + ": expected {\"problem\", \"chaffs\": [...]}");
  s.problem = j.value("problem", "");
  for (const auto& c : j["chaffs"]) {
    if (c.is_string()) s.chaffs.push_back({c.get<std::string>(), "manual"});
    else if (c.is_object() && c.contains("id") && c["id"].is_string())
      s.chaffs.push_back({c["id"].get<std::string>(), c.value("provenance", "manual")});
    else throw InputError(path.string() + ": each chaff needs an \"id\"");
  }
  return s;
}

json audit_to_json(const ChaffAudit& audit) {
  json j;
  j["corpus_size"] = audit.corpus_size;
  j["chaffs"] = json::array();
  for (const auto& e : audit.entries)
    j["chaffs"].push_back({{"id", e.mutant_id},
                           {"matched", e.matched},
                           {"pass_rate", e.pass_rate},
                           {"flag", std::string(audit_flag_name(e.flag))}});
  return j;
}

void write_truth_csv(std::ostream& out, const std::vector<TruthRow>& truth) {
  out << "raw_text,student_id,label\n";
  for (const auto& t : truth) out << csv_field(t.raw_text) << "," << csv_field(t.student_id) << "," << csv_field(t.label) << "\n";
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw InputError(path.string() + ": unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::map<std::string, std::string> read_ground_truth(const std::filesystem::path& path,
                                                     const std::vector<WfeRecord>* wfes) {
  const auto rows = read_csv(path);
  if (rows.empty()) throw InputError(path.string() + ": empty ground-truth file");
  const auto& header = rows.front();
  auto col = [&](const char* name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  };
  std::map<std::string, std::string> out;
  if (auto id = col("wfe_id"), label = col("class_label"); id && label) {
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() <= std::max(*id, *label)) throw InputError(where(path, r + 1) + ": too few columns");
      out[rows[r][*id]] = rows[r][*label];
    }
    return out;
  }
  auto text = col("raw_text"), student = col("student_id"), label = col("label");
  if (!(text && student && label))
    throw InputError(path.string() + ": header must be wfe_id,class_label or raw_text,student_id,label");
  if (!wfes) throw InputError(path.string() + ": raw_text ground truth needs --wfes to resolve ids");
  std::map<std::pair<std::string, std::string>, std::string> by_text;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() <= std::max({*text, *student, *label})) throw InputError(where(path, r + 1) + ": too few columns");
    by_text.emplace(std::make_pair(rows[r][*student], rows[r][*text]), rows[r][*label]);
  }
  for (const auto& w : *wfes) {
    auto it = by_text.find({w.student_id, w.example.raw_text});
    if (it != by_text.end()) out[w.wfe_id] = it->second;
  }
  return out;
}

json vscores_to_json(const VScores& v) {
  return {{"homogeneity", v.homogeneity}, {"completeness", v.completeness}, {"v_measure", v.v_measure}};
}

json ztest_to_json(const ZTestResult& z) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(x > 0 ? "inf" : "-inf"); };
  return {{"z", num(z.z)},       {"p", z.p},         {"log10_p", num(z.log10_p)}, {"rate1", z.rate1},
          {"rate2", z.rate2},    {"n1", z.n1},       {"n2", z.n2},                {"degenerate", z.degenerate}};
}

json effect_to_json(const EffectSize& e) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(x > 0 ? "inf" : "-inf"); };
  return {{"d", num(e.d)}, {"ci95", {num(e.ci_low), num(e.ci_high)}}, {"degenerate", e.degenerate}};
}

SynthConfig synth_config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("synth config must be a JSON object");
  SynthConfig c;
  c.seed = j.value("seed", c.seed);
  c.students = j.value("students", c.students);
  c.typo_rate = j.value("typo_rate", c.typo_rate);
  c.misconception_rate = j.value("misconception_rate", c.misconception_rate);
  c.submissions_max = j.value("submissions_max", c.submissions_max);
  c.spammer_count = j.value("spammer_count", c.spammer_count);
  c.spam_submissions = j.value("spam_submissions", c.spam_submissions);
  c.search_limit = j.value("search_limit", c.search_limit);
  if (j.contains("examples_per_student")) {
    const auto& r = j["examples_per_student"];
    if (!r.is_array() || r.size() != 2) throw std::invalid_argument("examples_per_student must be [min, max]");
    c.examples_min = r[0].get<std::size_t>();
    c.examples_max = r[1].get<std::size_t>();
  }
  if (!j.contains("misconception_mix") || !j["misconception_mix"].is_object())
    throw std::invalid_argument("synth config needs a \"misconception_mix\" object");
  for (const auto& [id, w] : j["misconception_mix"].items()) c.misconception_mix.emplace_back(id, w.get<double>());
  return c;
}

std::string file_hash(const std::filesystem::path& path) { return "fnv1a64:" + fnv1a64_hex(read_file(path)); }

void write_manifest(const std::filesystem::path& artifact, const Manifest& m) {
  json j;
  j["tool"] = "chaffkit";
  j["version"] = kToolVersion;
  j["command"] = m.command;
  j["problem"] = {{"ref", m.problem_ref}, {"hash", m.problem_hash}};
  j["inputs"] = json::array();
  for (const auto& [p, h] : m.inputs) j["inputs"].push_back({{"path", p}, {"hash", h}});
  j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ts;
  ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  j["timestamp"] = ts.str();
  j["artifact_hash"] = file_hash(artifact);
  std::ofstream out(artifact.string() + ".manifest.json");
  out << j.dump(2) << "\n";
}

std::optional<Manifest> read_manifest(const std::filesystem::path& artifact) {
  const std::filesystem::path side = artifact.string() + ".manifest.json";
  if (!std::filesystem::exists(side)) return std::nullopt;
  json j;
  try {
    j = json::parse(read_file(side));
  } catch (const json::parse_error& e) {
    throw InputError(side.string() + ": invalid JSON (" + e.what() + ")");
  }
  Manifest m;
  m.command = j.value("command", "");
  if (j.contains("problem") && j["problem"].is_object()) {
    m.problem_ref = j["problem"].value("ref", "");
    m.problem_hash = j["problem"].value("hash", "");
  }
  if (j.contains("seed") && j["seed"].is_number_unsigned()) m.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("inputs") && j["inputs"].is_array())
    for (const auto& in : j["inputs"]) m.inputs.emplace_back(in.value("path", ""), in.value("hash", ""));
  return m;
}

}  // namespace chaffkit
