#include "pqrank/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>

#include <json.hpp>

#include "pqrank/errors.hpp"
#include "pqrank/text.hpp"

namespace pqrank {

using nlohmann::json;

Sentence make_sentence(std::string text, bool is_pq_source) {
  Sentence s;
  s.tokens = tokenize(text);
  s.text = std::move(text);
  s.is_pq_source = is_pq_source;
  return s;
}

void validate_article(const Article& article) {
  if (article.id.empty()) fail(ErrorCode::format, "article with empty id");
  if (article.sentences.empty())
    fail(ErrorCode::format, "article '" + article.id + "' has no sentences");
  for (std::size_t i = 0; i < article.sentences.size(); ++i) {
    const Sentence& s = article.sentences[i];
    const bool has_text = s.text.find_first_not_of(" \t\r\n") != std::string::npos;
    if (has_text && s.tokens.empty()) {
      fail(ErrorCode::format, "article '" + article.id + "' sentence " + std::to_string(i) +
                                  ": text is nonempty but tokens are empty");
    }
    if (s.pos_tags && s.pos_tags->size() != s.tokens.size()) {
      fail(ErrorCode::format, "article '" + article.id + "' sentence " + std::to_string(i) +
                                  ": pos_tags length " + std::to_string(s.pos_tags->size()) +
                                  " != tokens length " + std::to_string(s.tokens.size()));
    }
  }
}

Article parse_article_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::format, std::string("invalid JSON: ") + e.what());
  }
  Article a;
  try {
    a.id = j.at("id").get<std::string>();
    a.source = j.value("source", std::string{});
    for (const json& js : j.at("sentences")) {
      Sentence s;
      s.text = js.at("text").get<std::string>();
      s.tokens = js.at("tokens").get<std::vector<std::string>>();
      if (auto it = js.find("pos_tags"); it != js.end() && !it->is_null())
        s.pos_tags = it->get<std::vector<std::string>>();
      s.is_pq_source = js.at("is_pq_source").get<bool>();
      a.sentences.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::format, std::string("bad record: ") + e.what());
  }
  validate_article(a);
  return a;
}

std::string format_article_line(const Article& article) {
  json sentences = json::array();
  for (const Sentence& s : article.sentences) {
    json js;
    js["text"] = s.text;
    js["tokens"] = s.tokens;
    js["pos_tags"] = s.pos_tags ? json(*s.pos_tags) : json(nullptr);
    js["is_pq_source"] = s.is_pq_source;
    sentences.push_back(std::move(js));
  }
  json j;
  j["id"] = article.id;
  j["source"] = article.source;
  j["sentences"] = std::move(sentences);
  return j.dump();
}

std::vector<Article> read_corpus(std::istream& in) {
  std::vector<Article> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Article a;
    try {
      a = parse_article_line(line);
    } catch (const Error& e) {
      fail(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen.insert(a.id).second)
      fail(ErrorCode::format,
           "line " + std::to_string(line_no) + ": duplicate article id '" + a.id + "'");
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Article> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open corpus " + path.string());
  return read_corpus(in);
}

void write_corpus(std::ostream& out, const std::vector<Article>& articles) {
  for (const Article& a : articles) out << format_article_line(a) << '\n';
}

void save_corpus(const std::filesystem::path& path, const std::vector<Article>& articles) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write corpus " + path.string());
  write_corpus(out, articles);
}

CorpusSplit split_corpus(const std::vector<Article>& articles, std::uint64_t seed) {
  const std::size_t n = articles.size();
  if (n < 10)
    fail(ErrorCode::invalid_argument,
         "split_corpus needs at least 10 articles, got " + std::to_string(n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n_train = n * 7 / 10;
  const std::size_t n_val = n / 10;
  CorpusSplit split;
  split.seed = seed;
  for (std::size_t k = 0; k < n; ++k) {
    const Article& a = articles[order[k]];
    if (k < n_train)
      split.train.push_back(a);
    else if (k < n_train + n_val)
      split.validation.push_back(a);
    else
      split.test.push_back(a);
  }
  return split;
}

ClassBalance class_balance(std::size_t positives, std::size_t negatives) {
  ClassBalance b;
  b.positives = positives;
  b.negatives = negatives;
  b.ratio = positives == 0 ? std::numeric_limits<double>::infinity()
                           : static_cast<double>(negatives) / static_cast<double>(positives);
  return b;
}

ClassBalance class_balance(const std::vector<Article>& articles) {
  std::size_t pos = 0;
  std::size_t neg = 0;
  for (const Article& a : articles)
    for (const Sentence& s : a.sentences) (s.is_pq_source ? pos : neg)++;
  return class_balance(pos, neg);
}

std::size_t sentence_count(const std::vector<Article>& articles) {
  std::size_t n = 0;
  for (const Article& a : articles) n += a.sentences.size();
  return n;
}

}  // namespace pqrank
