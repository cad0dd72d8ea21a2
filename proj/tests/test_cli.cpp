#include "doctest.h"

#include "chaffkit/io.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace chaffkit;

namespace {

const std::string kSource = CHAFFKIT_SOURCE_DIR;
const std::string kCli = CHAFFKIT_CLI;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

class Workdir {
 public:
  Workdir() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() / ("chaffkit-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(dir_);
  }
  ~Workdir() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& content) const { std::ofstream(path(name)) << content; }

  Result run(const std::string& args) const {
    const std::string cmd = "'" + kCli + "' " + args + " >'" + path(".stdout") + "' 2>'" + path(".stderr") + "'";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_file(path(".stdout"));
    r.err = read_file(path(".stderr"));
    return r;
  }

 private:
  fs::path dir_;
};

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

// synth -> extract -> featurize -> cluster -> select, all with files and manifests.
void pipeline(const Workdir& w, const std::string& problem, const std::string& synth_config) {
  const std::string p = "--problem " + problem + " ";
  REQUIRE(w.run(p + "--seed 7 --out " + w.path("subs.jsonl") + " synth --config " + synth_config + " --truth " +
                w.path("truth.csv"))
              .code == 0);
  REQUIRE(w.run(p + "--out " + w.path("wfes.jsonl") + " extract --submissions " + w.path("subs.jsonl")).code == 0);
  REQUIRE(w.run(p + "--jobs 3 --out " + w.path("vectors.jsonl") + " featurize --wfes " + w.path("wfes.jsonl")).code == 0);
  REQUIRE(w.run(p + "--out " + w.path("clusters.json") + " cluster --vectors " + w.path("vectors.jsonl")).code == 0);
  REQUIRE(w.run(p + "--out " + w.path("suite.json") + " select --n 4 --vectors " + w.path("vectors.jsonl")).code == 0);
}

}  // namespace

TEST_CASE("run prints the assessment") {
  Workdir w;
  const auto valid = w.run("--problem median run --suite " + kSource + "/tests/fixtures/median-valid.arr");
  CHECK(valid.code == 0);
  CHECK(valid.out.rfind("VALID: caught 2 of 4 chaffs", 0) == 0);
  const auto invalid = w.run("--problem median run --suite " + kSource + "/tests/fixtures/median-incorrect.arr");
  CHECK(invalid.code == 0);
  CHECK(contains(invalid.out, "line 6: median([list: 1, 2, 3]) is 3"));
  const auto j = w.run("--problem " + kSource + "/problems/median.json --format json run --suite " + kSource +
                       "/tests/fixtures/median-valid.arr --chaffs " + kSource + "/problems/median-suite.json");
  REQUIRE(j.code == 0);
  const json parsed = json::parse(j.out);
  CHECK(parsed["valid"] == true);
  CHECK(parsed["caught"] == 2);
}

TEST_CASE("usage errors exit with 2") {
  Workdir w;
  CHECK(w.run("").code == 2);
  CHECK(w.run("frobnicate").code == 2);
  CHECK(w.run("--problem median run").code == 2);
  CHECK(w.run("--problem median --format yaml run --suite x").code == 2);
  CHECK(w.run("--problem median cluster").code == 2);
  CHECK(w.run("--help").code == 0);
}

TEST_CASE("runtime errors exit with 1 and name the input") {
  Workdir w;
  const auto missing = w.run("--problem median run --suite " + w.path("nope.arr"));
  CHECK(missing.code == 1);
  CHECK(contains(missing.err, "nope.arr"));
  CHECK(w.run("--problem nosuch run --suite " + kSource + "/tests/fixtures/median-valid.arr").code == 1);

  w.write("subs.jsonl", "{\"student_id\":\"a\",\"timestamp\":\"t\",\"suite\":\"median([1]) is 2\"}\n{not json\n");
  const auto bad = w.run("--problem median extract --submissions " + w.path("subs.jsonl"));
  CHECK(bad.code == 1);
  CHECK(contains(bad.err, "subs.jsonl:2:"));

  w.write("vec.jsonl", "{\"wfe_id\":\"x\",\"student_id\":\"a\",\"example\":\"median([1]) is 2\",\"vector\":\"dd\"}\n");
  const auto short_vec = w.run("--problem median cluster --vectors " + w.path("vec.jsonl"));
  CHECK(short_vec.code == 1);
  CHECK(contains(short_vec.err, "vec.jsonl:1:"));
}

TEST_CASE("empty corpus clusters to an empty report") {
  Workdir w;
  w.write("empty.jsonl", "");
  const auto r = w.run("--problem median cluster --wfes " + w.path("empty.jsonl"));
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["total_wfes"] == 0);
  CHECK(j["clusters"].empty());
  const auto text = w.run("--problem median report --wfes " + w.path("empty.jsonl"));
  CHECK(text.code == 0);
  CHECK(contains(text.out, "0 clusters over 0 WFEs"));
}

TEST_CASE("artifacts carry manifests and reject a different problem") {
  Workdir w;
  pipeline(w, "docdiff", kSource + "/problems/docdiff-synth.json");
  const auto m = read_manifest(w.path("vectors.jsonl"));
  REQUIRE(m);
  CHECK(m->problem_hash == "fnv1a64:8a0149aeb4065aa3");
  CHECK(m->inputs.size() == 1);
  CHECK(fs::exists(w.path("suite.json.manifest.json")));

  const auto wrong = w.run("--problem median cluster --vectors " + w.path("vectors.jsonl"));
  CHECK(wrong.code == 1);
  CHECK(contains(wrong.err, "fnv1a64:8a0149aeb4065aa3"));

  const auto report = w.run("--problem docdiff report --clusters " + w.path("clusters.json") + " --top 3");
  CHECK(report.code == 0);
  CHECK(contains(report.out, "Feature Vector"));
  CHECK(contains(report.out, "all-d:"));

  const auto eval = w.run("--problem docdiff --format json eval-clusters --ground-truth " + w.path("truth.csv") +
                          " --wfes " + w.path("wfes.jsonl") + " --vectors " + w.path("vectors.jsonl"));
  REQUIRE(eval.code == 0);
  const json v = json::parse(eval.out);
  CHECK(v["v_measure"].get<double>() > 0);
  CHECK(v["v_measure"].get<double>() <= 1);
}

TEST_CASE("the pipeline is byte-for-byte reproducible") {
  Workdir a, b;
  pipeline(a, "docdiff", kSource + "/problems/docdiff-synth.json");
  pipeline(b, "docdiff", kSource + "/problems/docdiff-synth.json");
  for (const char* f : {"subs.jsonl", "truth.csv", "wfes.jsonl", "vectors.jsonl", "clusters.json", "suite.json"})
    CHECK_MESSAGE(read_file(a.path(f)) == read_file(b.path(f)), f);
}

TEST_CASE("compare from counts") {
  Workdir w;
  const auto r = w.run("--format json compare --k1 141 --n1 591 --k2 37 --n2 1546");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["z"].get<double>() == doctest::Approx(11.952745718032909));
}
