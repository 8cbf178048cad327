#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Workdir {
  fs::path path;
  explicit Workdir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Workdir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(PQRANK_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("cli help and argument errors") {
  CHECK(run("--help") == 0);
  CHECK(run("eval --help") == 0);
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("eval --model") == 2);
  CHECK(run("train-hc --corpus /nonexistent/c.jsonl --out /tmp/x.json") == 66);
}

TEST_CASE("cli pipeline is reproducible") {
  Workdir w("pqrank_cli_pipeline");
  const std::string gen = "--seed 5 gen-synthetic --articles 20 --sentences 12 --quote-pos 0.9 --quote-neg 0.05 --out ";
  REQUIRE(run(gen + w / "a.jsonl --store " + w / "a.bin --dim 16") == 0);
  REQUIRE(run(gen + w / "b.jsonl") == 0);
  CHECK(slurp(w / "a.jsonl") == slurp(w / "b.jsonl"));
  CHECK(fs::exists(w / "a.bin.tsv"));

  for (const std::string run_id : {"1", "2"}) {
    REQUIRE(run("--seed 5 train-ngram --corpus " + w / "a.jsonl" + " --unit char --n 2 --vocab-size 200 --split train --out " +
                w / ("m" + run_id + ".json")) == 0);
    REQUIRE(run("--seed 5 eval --split test --model " + w / ("m" + run_id + ".json") + " --corpus " +
                w / "a.jsonl" + " --out " + w / ("r" + run_id + ".csv")) == 0);
  }
  CHECK(slurp(w / "m1.json") == slurp(w / "m2.json"));
  const std::string report = slurp(w / "r1.csv");
  CHECK(report == slurp(w / "r2.csv"));
  CHECK(report.rfind("article_id,auc,n_pos,n_neg\n", 0) == 0);
  CHECK(report.find("# auc_avg=") != std::string::npos);

  const auto manifest = nlohmann::json::parse(slurp(w / "r1.csv.manifest.json"));
  const auto argv = manifest.at("command").get<std::vector<std::string>>();
  CHECK(std::find(argv.begin(), argv.end(), "eval") != argv.end());
  CHECK(manifest.at("seed") == 5);
  CHECK(manifest.at("config_sha256").get<std::string>().size() == 64);
  CHECK(manifest.at("inputs").size() == 2);

  REQUIRE(run("--seed 5 train-hc --features quote_count --corpus " + w / "a.jsonl" + " --out " + w / "hc.json") == 0);
  CHECK(run("rank --top 1 --model " + w / "hc.json" + " --corpus " + w / "a.jsonl" + " --out " + w / "rank.csv") == 0);
  CHECK(slurp(w / "rank.csv").rfind("article_id,rank,sentence_index,probability\n", 0) == 0);
  CHECK(run("summarize --method lexrank --corpus " + w / "a.jsonl" + " --out " + w / "s.csv") == 0);
  CHECK(run("analyze dist --feature quote_count --bins 4 --corpus " + w / "a.jsonl" + " --out " + w / "d.csv") == 0);
  CHECK(run("lexicons validate") == 0);
}

TEST_CASE("cli input faults map to exit codes") {
  Workdir w("pqrank_cli_faults");
  REQUIRE(run("gen-synthetic --articles 6 --sentences 5 --out " + w / "c.jsonl --store " + w / "e.bin --dim 8") == 0);
  CHECK(run("embed-check --store " + w / "e.bin --corpus " + w / "c.jsonl --dim 8") == 0);
  CHECK(run("embed-check --store " + w / "e.bin --corpus " + w / "c.jsonl --dim 9") == 65);

  REQUIRE(run("gen-synthetic --articles 7 --sentences 5 --out " + w / "bigger.jsonl") == 0);
  CHECK(run("embed-check --store " + w / "e.bin --corpus " + w / "bigger.jsonl") == 65);

  std::ofstream(w / "broken.jsonl") << "{\"id\": \n";
  CHECK(run("features --corpus " + w / "broken.jsonl --out " + w / "f.csv") == 65);
  std::ofstream(w / "e.bin", std::ios::binary | std::ios::app) << "xx";
  CHECK(run("embed-check --store " + w / "e.bin --corpus " + w / "c.jsonl") == 65);
  CHECK(run("embed-check --store " + w / "missing.bin --corpus " + w / "c.jsonl") == 66);
  CHECK(run("gen-synthetic --pos-rate 1.5 --out " + w / "x.jsonl") == 2);
}
