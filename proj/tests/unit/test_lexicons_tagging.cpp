#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "pqrank/errors.hpp"
#include "pqrank/lexicons.hpp"
#include "pqrank/tagger.hpp"
#include "pqrank/text.hpp"

using namespace pqrank;
using Tags = std::vector<std::string>;

TEST_CASE("bundled lexicons load and validate") {
  const Lexicons& lex = Lexicons::bundled();
  CHECK(lex.stopwords.contains("the"));
  CHECK(lex.stopwords.contains("THE"));
  CHECK(lex.easy_words.size() > 1000);
  CHECK(lex.sentiment.entries.size() > 1000);
  CHECK(lex.valence.default_rating == 5.0);
  CHECK(lex.arousal.default_rating == 4.0);
  CHECK(lex.concreteness.default_rating == 5.0);
  for (const LexiconReport& r : validate_lexicon_dir(bundled_lexicon_dir()))
    CHECK_MESSAGE(r.problem.empty(), r.file << ": " << r.problem);
}

TEST_CASE("affect lookup is case-insensitive with exact defaults") {
  const auto dir = std::filesystem::temp_directory_path() / "pqrank_lex_case";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "v.csv");
    f << "word,rating\nHappy,8.5\nsad,2.25\n";
  }
  const AffectLexicon v = load_affect_csv(dir / "v.csv", "valence", 5.0);
  CHECK(v.rating("happy") == 8.5);
  CHECK(v.rating("HAPPY") == 8.5);
  CHECK(v.rating("Sad") == 2.25);
  CHECK(v.rating("table") == 5.0);
  CHECK_FALSE(v.contains("table"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed lexicon files are reported") {
  const auto dir = std::filesystem::temp_directory_path() / "pqrank_lex_bad";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "v.csv");
    f << "word,rating\nhappy,lots\n";
  }
  CHECK_THROWS_AS(load_affect_csv(dir / "v.csv", "valence", 5.0), Error);
  CHECK_THROWS_AS(load_affect_csv(dir / "missing.csv", "valence", 5.0), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sentiment scores") {
  SentimentLexicon s;
  s.entries = {{"good", 2.0}, {"bad", -3.0}};
  const SentimentScores neutral = s.score({"the", "table"});
  CHECK(neutral.compound == 0.0);
  CHECK(neutral.positive == 0.0);
  const SentimentScores mixed = s.score({"good", "bad", "good"});
  CHECK(mixed.positive == doctest::Approx(4.0 / 7.0));
  CHECK(mixed.negative == doctest::Approx(3.0 / 7.0));
  CHECK(mixed.compound == doctest::Approx(1.0 / std::sqrt(1.0 + 15.0)));
  CHECK(s.polarity("GOOD") == 2.0);
}

TEST_CASE("pos_tag fixtures") {
  CHECK(pos_tag({"She", "runs"}) == Tags{"PRP", "VB"});
  CHECK(pos_tag({"7"}) == Tags{"CD"});
  CHECK(pos_tag({}).empty());
  CHECK(normalize_tag("NN") == "NN");
  CHECK(normalize_tag("DT") == "OTHER");
}

TEST_CASE("pos_tag agrees with a hand-tagged fixture") {
  std::ifstream in(oracle::data_dir() / "tagged_fixture.txt");
  REQUIRE(in);
  std::size_t total = 0, agree = 0;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> tokens, gold;
    std::stringstream ss(line);
    for (std::string item; ss >> item;) {
      const auto slash = item.rfind('/');
      tokens.push_back(item.substr(0, slash));
      gold.push_back(item.substr(slash + 1));
    }
    const Tags got = pos_tag(tokens);
    REQUIRE(got.size() == tokens.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      ++total;
      if (got[i] == gold[i])
        ++agree;
      else
        MESSAGE(tokens[i] << ": got " << got[i] << ", gold " << gold[i]);
    }
  }
  const double rate = static_cast<double>(agree) / static_cast<double>(total);
  MESSAGE("tagger agreement " << rate << " over " << total << " tokens");
  CHECK(rate >= 0.90);
}

TEST_CASE("pos_tag output length equals input length") {
  const std::string text =
      "In 2019 , the Ministry of Health said “ nothing ” would change , but 3 nurses quit .";
  std::vector<std::string> tokens;
  std::stringstream ss(text);
  for (std::string t; ss >> t;) tokens.push_back(t);
  for (std::size_t n = 0; n <= tokens.size(); ++n) {
    const std::vector<std::string> prefix(tokens.begin(), tokens.begin() + static_cast<long>(n));
    const Tags tags = pos_tag(prefix);
    CHECK(tags.size() == n);
    for (const std::string& t : tags) CHECK(normalize_tag(t) == t);
  }
}
