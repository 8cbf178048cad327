#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "pqrank/embeddings.hpp"
#include "pqrank/synthetic.hpp"

using namespace pqrank;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Writes the binary layout by hand, the way an external exporter would.
void write_raw_store(const fs::path& p, const char* magic, std::uint32_t n, std::uint32_t d,
                     const std::vector<float>& values) {
  std::ofstream f(p, std::ios::binary);
  f.write(magic, 6);
  f.write(reinterpret_cast<const char*>(&n), 4);
  f.write(reinterpret_cast<const char*>(&d), 4);
  f.write(reinterpret_cast<const char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(float)));
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

StoreFault fault_of(const fs::path& v, const fs::path& i) {
  try {
    load_store(v, i);
  } catch (const StoreError& e) {
    return e.fault();
  }
  FAIL("expected a store error");
  return StoreFault::bad_magic;
}

Article article(const std::string& id, std::size_t n) {
  Article a;
  a.id = id;
  for (std::size_t i = 0; i < n; ++i) a.sentences.push_back(make_sentence("Sentence " + std::to_string(i) + "."));
  return a;
}

}  // namespace

TEST_CASE("exporter layout loads") {
  TempDir dir("pqrank_store_layout");
  write_raw_store(dir.path / "v.bin", "PQEMB1", 3, 2, {1.5f, -2.0f, 0.25f, 0.0f, 8.0f, 1e-3f});
  write_text(dir.path / "v.tsv", "doc\t0\t0\ndoc\t1\t1\ndoc\t2\t2\n");
  const EmbeddingStore s = load_store(dir.path / "v.bin", dir.path / "v.tsv");
  CHECK(s.size() == 3);
  CHECK(s.dim == 2);
  CHECK(s.at("doc", 0)[0] == 1.5);
  CHECK(s.at("doc", 2)[1] == static_cast<double>(1e-3f));
  CHECK_FALSE(s.find("doc", 3).has_value());
  CHECK(missing_sentences(s, {article("doc", 3)}).empty());
  CHECK(missing_sentences(s, {article("doc", 4)}).size() == 1);
}

TEST_CASE("store round trip") {
  TempDir dir("pqrank_store_rt");
  SyntheticSpec spec;
  spec.articles = 4;
  spec.sentences_per_article = 5;
  const auto corpus = gen_synthetic(spec, 1);
  EmbeddingStore s = hashed_token_store(corpus, 8, 3);
  for (double& v : s.rows.data) v = static_cast<double>(static_cast<float>(v));
  save_store(dir.path / "e.bin", dir.path / "e.tsv", s);
  const EmbeddingStore back = load_store(dir.path / "e.bin", dir.path / "e.tsv");
  CHECK(back.dim == 8);
  CHECK(back.rows.data == s.rows.data);
  CHECK(back.index == s.index);
}

TEST_CASE("store faults are distinguished") {
  TempDir dir("pqrank_store_faults");
  const fs::path v = dir.path / "v.bin", i = dir.path / "v.tsv";
  write_text(i, "a\t0\t0\na\t1\t1\n");

  write_raw_store(v, "PQEMB0", 2, 2, {1, 2, 3, 4});
  CHECK(fault_of(v, i) == StoreFault::bad_magic);

  write_raw_store(v, "PQEMB1", 2, 2, {1, 2, 3});
  CHECK(fault_of(v, i) == StoreFault::truncated);

  write_raw_store(v, "PQEMB1", 2, 2, {1, 2, 3, 4, 5});
  CHECK(fault_of(v, i) == StoreFault::truncated);

  write_raw_store(v, "PQEMB1", 2, 2, {1, std::numeric_limits<float>::quiet_NaN(), 3, 4});
  CHECK(fault_of(v, i) == StoreFault::non_finite);

  write_raw_store(v, "PQEMB1", 2, 2, {1, 2, 3, std::numeric_limits<float>::infinity()});
  CHECK(fault_of(v, i) == StoreFault::non_finite);

  write_raw_store(v, "PQEMB1", 2, 2, {1, 2, 3, 4});
  write_text(i, "a\t0\t0\n");
  CHECK(fault_of(v, i) == StoreFault::missing_index);

  write_text(i, "a\t0\t0\na\t1\t7\n");
  CHECK(fault_of(v, i) == StoreFault::bad_index);
  write_text(i, "a\t0\t0\na\tone\t1\n");
  CHECK(fault_of(v, i) == StoreFault::bad_index);
  write_text(i, "a\t0\n");
  CHECK(fault_of(v, i) == StoreFault::bad_index);

  CHECK_THROWS_AS(load_store(v, dir.path / "absent.tsv"), Error);
}

TEST_CASE("document embedding is the sentence mean") {
  EmbeddingStore s;
  s.dim = 2;
  s.rows = Matrix(3, 2);
  s.rows(0, 0) = 1;
  s.rows(1, 1) = 1;
  s.rows(2, 0) = 3;
  s.rows(2, 1) = -4;
  s.index = {{{"two", 0}, 0}, {{"two", 1}, 1}, {{"one", 0}, 2}};
  CHECK(doc_embedding(s, article("two", 2)).vector == std::vector<double>{0.5, 0.5});
  CHECK(doc_embedding(s, article("one", 1)).vector == std::vector<double>{3, -4});
  try {
    doc_embedding(s, article("two", 3));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("two") != std::string::npos);
  }
  const Matrix d = document_matrix(s, {article("two", 2)});
  CHECK(d.rows == 2);
  CHECK(d(1, 0) == 0.5);
}

TEST_CASE("document norm is bounded by the largest sentence norm") {
  SyntheticSpec spec;
  spec.articles = 20;
  spec.sentences_per_article = 6;
  const auto corpus = gen_synthetic(spec, 8);
  const EmbeddingStore s = hashed_token_store(corpus, 16, 2);
  for (const Article& a : corpus) {
    double max_norm = 0.0;
    for (std::size_t i = 0; i < a.sentences.size(); ++i) {
      double n = 0.0;
      for (double v : s.at(a.id, i)) n += v * v;
      max_norm = std::max(max_norm, std::sqrt(n));
    }
    double dn = 0.0;
    for (double v : doc_embedding(s, a).vector) dn += v * v;
    CHECK(std::sqrt(dn) <= max_norm + 1e-12);
  }
}

TEST_CASE("synthetic stores") {
  const std::vector<std::string> toks = {"Quasar", "report", "."};
  CHECK(hashed_token_embedding(toks, 8, 1) == hashed_token_embedding(toks, 8, 1));
  CHECK(hashed_token_embedding({"quasar", "report", "."}, 8, 1) == hashed_token_embedding(toks, 8, 1));
  CHECK_FALSE(hashed_token_embedding(toks, 8, 1) == hashed_token_embedding(toks, 8, 2));

  Article a = article("p", 2);
  a.sentences[1] = make_sentence("The zzmark sentence.");
  const EmbeddingStore base = hashed_token_store({a}, 4, 5);
  const EmbeddingStore planted = planted_dimension_store({a}, 4, 2, "zzmark", 3.0, 5);
  CHECK(planted.at("p", 0)[2] == base.at("p", 0)[2]);
  CHECK(planted.at("p", 1)[2] == doctest::Approx(base.at("p", 1)[2] + 3.0));
  CHECK_THROWS_AS(planted_dimension_store({a}, 4, 4, "zzmark", 3.0, 5), Error);
}
