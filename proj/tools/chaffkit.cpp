// chaffkit: command-line front end for the example-assessment pipeline.
//
//   synth -> extract -> featurize -> cluster -> report / select -> audit
//
// Stages talk through files. Exit status: 0 ok, 1 domain error, 2 usage error.

#include "CLI11.hpp"
#include "chaffkit/baseline.hpp"
#include "chaffkit/builtins.hpp"
#include "chaffkit/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace chaffkit;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string problem;
  std::string suite;
  std::string chaffs;
  std::string submissions;
  std::string wfes;
  std::string vectors;
  std::string vectors2;
  std::string clusters;
  std::string assignments;
  std::string ground_truth;
  std::string config;
  std::string truth_out;
  std::string out;
  std::string format;
  std::vector<std::string> skip;
  std::vector<std::string> manual;
  std::vector<std::string> exclude_students;
  std::vector<std::string> exclude_labels;
  std::size_t top = 10;
  std::size_t n = 5;
  std::size_t min_students = 1;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  bool cover_subproblems = false;
  bool normalize = false;
  double hi = 0.8;
  double lo = 0.01;
  std::optional<std::uint64_t> k1, n1, k2, n2;
  std::string command_line;
};

struct Loaded {
  ProblemSpec spec;
  std::string hash;
};

Loaded load(const Options& o) {
  if (o.problem.empty()) throw UsageError("--problem is required");
  Loaded l{resolve_problem(o.problem), ""};
  l.hash = problem_hash(l.spec);
  return l;
}

// An input written by an earlier stage must come from the same problem definition.
void check_manifest(const std::string& path, const Loaded& p) {
  auto m = read_manifest(path);
  if (m && !m->problem_hash.empty() && m->problem_hash != p.hash)
    throw InputError(path + ": produced for problem " + m->problem_hash + ", but the loaded problem is " + p.hash);
}

void emit(const Options& o, const std::string& content, const Loaded* p, std::vector<std::string> inputs) {
  if (o.out.empty() || o.out == "-") {
    std::cout << content;
    return;
  }
  {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InputError(o.out + ": cannot write");
    f << content;
  }
  Manifest m;
  m.command = o.command_line;
  if (p) {
    m.problem_ref = o.problem;
    m.problem_hash = p->hash;
  }
  for (const auto& in : inputs)
    if (!in.empty()) m.inputs.emplace_back(in, file_hash(in));
  m.seed = o.seed;
  write_manifest(o.out, m);
}

std::string format_or(const Options& o, const std::string& fallback, std::initializer_list<const char*> allowed) {
  const std::string f = o.format.empty() ? fallback : o.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw UsageError("--format " + f + " is not supported by this command");
}

std::vector<FeaturedWfe> featured_input(const Options& o, const Loaded& p, std::vector<WfeRecord>* keep_wfes = nullptr) {
  if (!o.vectors.empty()) {
    check_manifest(o.vectors, p);
    return to_featured(read_vectors(o.vectors, p.spec.mutant_family.size()));
  }
  if (!o.wfes.empty()) {
    check_manifest(o.wfes, p);
    auto wfes = read_wfes(o.wfes);
    auto out = featurize_all(wfes, p.spec, o.jobs);
    if (keep_wfes) *keep_wfes = std::move(wfes);
    return out;
  }
  throw UsageError("one of --vectors or --wfes is required");
}

std::vector<Cluster> ranked_clusters(const Options& o, const Loaded& p, const std::vector<FeaturedWfe>& featured) {
  auto clusters = cluster_by_vector(featured);
  describe_clusters(clusters, p.spec);
  RankOptions ro;
  ro.exclude_students.insert(o.exclude_students.begin(), o.exclude_students.end());
  ro.min_distinct_students = o.min_students;
  return rank_clusters(std::move(clusters), ro);
}

int cmd_run(const Options& o) {
  const Loaded p = load(o);
  if (o.suite.empty()) throw UsageError("--suite is required");
  const ParseResult parsed = parse_suite(read_file(o.suite));
  std::vector<Implementation> deployed = p.spec.mutant_family;
  if (!o.chaffs.empty()) deployed = suite_implementations(read_suite(o.chaffs), p.spec);
  const AssessmentReport r = assess_suite(parsed.suite, p.spec, deployed, parsed.errors);
  const std::string f = format_or(o, "text", {"text", "json"});
  if (f == "text") {
    emit(o, render_assessment(r), &p, {o.suite, o.chaffs});
    return 0;
  }
  json j;
  j["valid"] = r.valid;
  j["invalid_lines"] = r.invalid_lines();
  j["chaffs_deployed"] = r.chaffs_deployed;
  j["caught"] = r.caught_count();
  j["chaffs"] = json::array();
  for (const auto& c : r.chaffs) j["chaffs"].push_back({{"id", c.chaff_id}, {"caught", c.caught}, {"lines", c.caught_by_lines}});
  j["parse_errors"] = json::array();
  for (const auto& e : r.parse_errors)
    j["parse_errors"].push_back({{"line", e.line}, {"kind", std::string(parse_error_name(e.kind))}, {"message", e.message}});
  j["hints"] = json::array();
  for (const auto& h : r.hints) j["hints"].push_back({{"line", h.line}, {"example", h.example_text}, {"hint", h.text}});
  emit(o, j.dump(2) + "\n", &p, {o.suite, o.chaffs});
  return 0;
}

int cmd_extract(const Options& o) {
  const Loaded p = load(o);
  if (o.submissions.empty()) throw UsageError("--submissions is required");
  const ExtractResult r = extract_wfes(read_submissions(o.submissions), p.spec);
  std::ostringstream out;
  write_wfes(out, r.wfes);
  emit(o, out.str(), &p, {o.submissions});
  std::cerr << "extract: " << r.examples_seen << " examples, " << r.wfes.size() << " WFEs, " << r.duplicates
            << " duplicates, " << r.parse_errors << " unparseable lines\n";
  return 0;
}

int cmd_featurize(const Options& o) {
  const Loaded p = load(o);
  if (o.wfes.empty()) throw UsageError("--wfes is required");
  check_manifest(o.wfes, p);
  const auto wfes = read_wfes(o.wfes);
  const auto featured = featurize_all(wfes, p.spec, o.jobs);
  std::ostringstream out;
  write_vectors(out, wfes, featured);
  emit(o, out.str(), &p, {o.wfes});
  return 0;
}

std::string clusters_output(const Options& o, const Loaded& p, const std::vector<Cluster>& ranked, std::size_t total,
                            const std::string& fallback) {
  const std::string f = format_or(o, fallback, {"json", "csv", "text"});
  if (f == "json") return clusters_to_json(ranked, p.spec, total).dump(2) + "\n";
  if (f == "csv") {
    std::ostringstream out;
    write_clusters_csv(out, ranked);
    return out.str();
  }
  return render_cluster_table(ranked, ranked.size(), total);
}

int cmd_cluster(const Options& o) {
  const Loaded p = load(o);
  const auto featured = featured_input(o, p);
  const auto ranked = ranked_clusters(o, p, featured);
  emit(o, clusters_output(o, p, ranked, featured.size(), "json"), &p, {o.vectors, o.wfes});
  return 0;
}

int cmd_report(const Options& o) {
  const Loaded p = load(o);
  std::vector<Cluster> ranked;
  std::size_t total = 0;
  if (!o.clusters.empty()) {
    check_manifest(o.clusters, p);
    auto clusters = read_clusters(o.clusters);
    for (auto& c : clusters) {
      if (c.vector.size() != p.spec.mutant_family.size())
        throw InputError(o.clusters + ": cluster " + c.id() + " does not match the problem's mutant family");
      total += c.size();
    }
    describe_clusters(clusters, p.spec);
    RankOptions ro;
    ro.exclude_students.insert(o.exclude_students.begin(), o.exclude_students.end());
    ro.min_distinct_students = o.min_students;
    ranked = rank_clusters(std::move(clusters), ro);
  } else {
    const auto featured = featured_input(o, p);
    total = featured.size();
    ranked = ranked_clusters(o, p, featured);
  }
  const std::string f = format_or(o, "text", {"json", "csv", "text"});
  if (f == "text") {
    emit(o, render_cluster_table(ranked, o.top, total), &p, {o.clusters, o.vectors, o.wfes});
    return 0;
  }
  if (ranked.size() > o.top) ranked.resize(o.top);
  emit(o, clusters_output(o, p, ranked, total, f), &p, {o.clusters, o.vectors, o.wfes});
  return 0;
}

int cmd_select(const Options& o) {
  const Loaded p = load(o);
  const auto featured = featured_input(o, p);
  const auto ranked = ranked_clusters(o, p, featured);
  SelectOptions so;
  so.n = o.n;
  so.skip.insert(o.skip.begin(), o.skip.end());
  so.manual = o.manual;
  so.must_cover_subproblems = o.cover_subproblems;
  const ChaffSuite suite = select_chaffs(ranked, p.spec, per_chaff_counts(featured, p.spec.mutant_family.size()), so);
  for (const auto& w : suite.warnings) std::cerr << "select: warning: " << w << "\n";
  format_or(o, "json", {"json"});
  emit(o, suite_to_json(suite, p.spec).dump(2) + "\n", &p, {o.vectors, o.wfes});
  return 0;
}

int cmd_audit(const Options& o) {
  const Loaded p = load(o);
  if (o.chaffs.empty()) throw UsageError("--chaffs is required");
  const auto featured = featured_input(o, p);
  const ChaffAudit a = audit_chaffs(featured, read_suite(o.chaffs), p.spec, {o.hi, o.lo});
  const std::string f = format_or(o, "text", {"json", "text"});
  if (f == "json") {
    emit(o, audit_to_json(a).dump(2) + "\n", &p, {o.vectors, o.wfes, o.chaffs});
    return 0;
  }
  std::ostringstream out;
  out << "corpus: " << a.corpus_size << " WFEs\n";
  for (const auto& e : a.entries) {
    out << e.mutant_id << ": passed by " << e.matched << " (" << std::fixed << std::setprecision(1) << e.pass_rate * 100
        << "%)";
    if (e.flag != AuditFlag::Ok) out << "  [" << audit_flag_name(e.flag) << "]";
    out << "\n";
  }
  emit(o, out.str(), &p, {o.vectors, o.wfes, o.chaffs});
  return 0;
}

// wfe_id -> cluster id, from whichever clustering input was given.
std::map<std::string, std::string> cluster_assignment(const Options& o) {
  std::map<std::string, std::string> out;
  if (!o.assignments.empty()) {
    const auto rows = read_csv(o.assignments);
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() < 2) throw InputError(o.assignments + ":" + std::to_string(r + 1) + ": too few columns");
      out[rows[r][0]] = rows[r][1];
    }
  } else if (!o.clusters.empty()) {
    for (const auto& c : read_clusters(o.clusters))
      for (const auto& m : c.members) out[m.wfe_id] = c.id();
  } else if (!o.vectors.empty()) {
    for (const auto& v : read_vectors(o.vectors)) out[v.wfe_id] = v.vector.compact();
  } else {
    throw UsageError("one of --clusters, --vectors or --assignments is required");
  }
  return out;
}

int cmd_eval_clusters(const Options& o) {
  if (o.ground_truth.empty()) throw UsageError("--ground-truth is required");
  std::vector<WfeRecord> wfes;
  if (!o.wfes.empty()) wfes = read_wfes(o.wfes);
  const auto truth = read_ground_truth(o.ground_truth, o.wfes.empty() ? nullptr : &wfes);
  const auto assigned = cluster_assignment(o);
  const std::set<std::string> excluded(o.exclude_labels.begin(), o.exclude_labels.end());
  LabeledPartition part;
  std::size_t unlabeled = 0;
  for (const auto& [id, cluster] : assigned) {
    auto it = truth.find(id);
    if (it == truth.end()) {
      ++unlabeled;
      continue;
    }
    if (excluded.count(it->second)) continue;
    part.push_back({id, it->second, cluster});
  }
  if (part.empty()) throw InputError(o.ground_truth + ": no clustered WFE has a ground-truth label");
  const VScores v = v_measure(part);
  const std::string f = format_or(o, "json", {"json", "text"});
  if (f == "json") {
    json j = vscores_to_json(v);
    j["items"] = part.size();
    j["unlabeled"] = unlabeled;
    emit(o, j.dump(2) + "\n", nullptr, {o.ground_truth, o.clusters, o.vectors, o.assignments});
  } else {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << "homogeneity  " << v.homogeneity << "\ncompleteness " << v.completeness
        << "\nv-measure    " << v.v_measure << "\nitems        " << part.size() << " (" << unlabeled << " unlabeled)\n";
    emit(o, out.str(), nullptr, {o.ground_truth, o.clusters, o.vectors, o.assignments});
  }
  return 0;
}

int cmd_baseline(const Options& o) {
  if (o.wfes.empty()) throw UsageError("--wfes is required");
  const auto wfes = read_wfes(o.wfes);
  BaselineOptions bo;
  bo.normalize_text = o.normalize;
  const BaselineClustering bc = baseline_cluster(wfes, bo);
  format_or(o, "csv", {"csv"});
  std::ostringstream out;
  out << "wfe_id,exemplar_wfe_id\n";
  for (std::size_t i = 0; i < wfes.size(); ++i) out << wfes[i].wfe_id << "," << wfes[bc.exemplar_of[i]].wfe_id << "\n";
  emit(o, out.str(), nullptr, {o.wfes});
  std::cerr << "baseline: " << bc.exemplars().size() << " exemplars, " << bc.iterations_run << " iterations"
            << (bc.converged ? "" : " (did not converge)") << "\n";
  return 0;
}

int cmd_compare(const Options& o) {
  std::uint64_t k1, n1, k2, n2;
  if (o.k1 && o.n1 && o.k2 && o.n2) {
    k1 = *o.k1, n1 = *o.n1, k2 = *o.k2, n2 = *o.n2;
  } else if (!o.vectors.empty() && !o.vectors2.empty()) {
    std::tie(k1, n1) = small_m_rate(to_featured(read_vectors(o.vectors)));
    std::tie(k2, n2) = small_m_rate(to_featured(read_vectors(o.vectors2)));
  } else {
    throw UsageError("give --k1 --n1 --k2 --n2, or --vectors and --vectors2");
  }
  const ZTestResult z = two_proportion_z(k1, n1, k2, n2);
  const EffectSize d = cohens_d(k1, n1, k2, n2);
  const std::string f = format_or(o, "json", {"json", "text"});
  if (f == "json") {
    json j = ztest_to_json(z);
    j["effect_size"] = effect_to_json(d);
    emit(o, j.dump(2) + "\n", nullptr, {o.vectors, o.vectors2});
  } else {
    std::ostringstream out;
    out << "rate1 " << k1 << "/" << n1 << " = " << z.rate1 << "\nrate2 " << k2 << "/" << n2 << " = " << z.rate2
        << "\nz " << z.z << "\np " << z.p << " (log10 " << z.log10_p << ")\nd " << d.d << " [" << d.ci_low << ", "
        << d.ci_high << "]\n";
    emit(o, out.str(), nullptr, {o.vectors, o.vectors2});
  }
  return 0;
}

int cmd_synth(const Options& o) {
  const Loaded p = load(o);
  if (o.config.empty()) throw UsageError("--config is required");
  if (!o.seed) throw UsageError("--seed is required");
  json cj;
  try {
    cj = json::parse(read_file(o.config));
  } catch (const json::parse_error& e) {
    throw InputError(o.config + ": invalid JSON (" + e.what() + ")");
  }
  SynthConfig cfg;
  try {
    cfg = synth_config_from_json(cj);
  } catch (const std::exception& e) {
    throw InputError(o.config + ": " + e.what());
  }
  cfg.seed = *o.seed;
  const SynthCohort cohort = generate_cohort(p.spec, cfg);
  std::ostringstream subs;
  write_submissions(subs, cohort.submissions);
  emit(o, subs.str(), &p, {o.config});
  if (!o.truth_out.empty()) {
    Options t = o;
    t.out = o.truth_out;
    std::ostringstream truth;
    write_truth_csv(truth, cohort.truth);
    emit(t, truth.str(), &p, {o.config});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  for (int i = 0; i < argc; ++i) o.command_line += (i ? " " : "") + std::string(argv[i]);

  CLI::App app{"chaffkit: assess example suites and derive chaff suites from wheat-failing examples"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--problem", o.problem, "problem config (.json) or built-in name (median, docdiff)");
  app.add_option("--out", o.out, "output file (default stdout); a .manifest.json sidecar is written next to it");
  app.add_option("--format", o.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--jobs", o.jobs, "worker threads for featurization")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", o.seed, "seed for randomized commands");

  auto* run = app.add_subcommand("run", "assess an example suite against wheats and chaffs");
  run->add_option("--suite", o.suite, "example suite text file")->required();
  run->add_option("--chaffs", o.chaffs, "chaff suite JSON (default: the whole mutant family)");

  auto* extract = app.add_subcommand("extract", "collect wheat-failing examples from submissions");
  extract->add_option("--submissions", o.submissions, "submissions JSONL")->required();

  auto* featurize = app.add_subcommand("featurize", "compute m/d feature vectors for WFEs");
  featurize->add_option("--wfes", o.wfes, "WFE JSONL")->required();

  auto add_corpus = [&](CLI::App* sc) {
    sc->add_option("--vectors", o.vectors, "feature vectors JSONL");
    sc->add_option("--wfes", o.wfes, "WFE JSONL (featurized on the fly)");
    sc->add_option("--exclude-students", o.exclude_students, "student ids to leave out of ranking")->delimiter(',');
    sc->add_option("--min-students", o.min_students, "drop clusters with fewer distinct students");
  };
  auto* cluster = app.add_subcommand("cluster", "group WFEs by feature vector");
  add_corpus(cluster);

  auto* report = app.add_subcommand("report", "print the largest clusters and the all-d share");
  add_corpus(report);
  report->add_option("--clusters", o.clusters, "cluster report JSON from `cluster`");
  report->add_option("--top", o.top, "rows to show");

  auto* select = app.add_subcommand("select", "choose a chaff suite from ranked clusters");
  add_corpus(select);
  select->add_option("--n", o.n, "suite size");
  select->add_option("--skip", o.skip, "cluster ids (compact vectors) to pass over")->delimiter(',');
  select->add_option("--manual", o.manual, "mutant ids to pin first")->delimiter(',');
  select->add_flag("--cover-subproblems", o.cover_subproblems, "ensure every subproblem has a chaff");

  auto* audit = app.add_subcommand("audit", "flag chaffs passed by too many or too few WFEs");
  add_corpus(audit);
  audit->add_option("--chaffs", o.chaffs, "chaff suite JSON")->required();
  audit->add_option("--hi", o.hi, "pass rate at or above which a chaff is under-constrained");
  audit->add_option("--lo", o.lo, "pass rate at or below which a chaff is over-constrained");

  auto* eval = app.add_subcommand("eval-clusters", "homogeneity, completeness and V-measure against ground truth");
  eval->add_option("--ground-truth", o.ground_truth, "CSV: wfe_id,class_label or raw_text,student_id,label")->required();
  eval->add_option("--clusters", o.clusters, "cluster report JSON");
  eval->add_option("--vectors", o.vectors, "feature vectors JSONL (cluster = vector)");
  eval->add_option("--assignments", o.assignments, "CSV: wfe_id,cluster (e.g. from `baseline`)");
  eval->add_option("--wfes", o.wfes, "WFE JSONL, to join raw_text ground truth to wfe ids");
  eval->add_option("--exclude-label", o.exclude_labels, "ground-truth classes to leave out")->delimiter(',');

  auto* baseline = app.add_subcommand("baseline", "Levenshtein + affinity propagation clustering of WFE text");
  baseline->add_option("--wfes", o.wfes, "WFE JSONL")->required();
  baseline->add_flag("--normalize", o.normalize, "lowercase and collapse whitespace first");

  auto* compare = app.add_subcommand("compare", "two-proportion z-test and Cohen's d on small-m rates");
  compare->add_option("--k1", o.k1);
  compare->add_option("--n1", o.n1);
  compare->add_option("--k2", o.k2);
  compare->add_option("--n2", o.n2);
  compare->add_option("--vectors", o.vectors, "first cohort's vectors");
  compare->add_option("--vectors2", o.vectors2, "second cohort's vectors");

  auto* synth = app.add_subcommand("synth", "generate a synthetic cohort with planted misconceptions");
  synth->add_option("--config", o.config, "synth config JSON")->required();
  synth->add_option("--truth", o.truth_out, "write the planted-truth CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(o);
    if (extract->parsed()) return cmd_extract(o);
    if (featurize->parsed()) return cmd_featurize(o);
    if (cluster->parsed()) return cmd_cluster(o);
    if (report->parsed()) return cmd_report(o);
    if (select->parsed()) return cmd_select(o);
    if (audit->parsed()) return cmd_audit(o);
    if (eval->parsed()) return cmd_eval_clusters(o);
    if (baseline->parsed()) return cmd_baseline(o);
    if (compare->parsed()) return cmd_compare(o);
    if (synth->parsed()) return cmd_synth(o);
  } catch (const UsageError& e) {
    std::cerr << "chaffkit: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "chaffkit: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
