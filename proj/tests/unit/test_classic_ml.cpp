#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <random>

#include "oracles.hpp"
#include "pqrank/classic_ml.hpp"
#include "pqrank/errors.hpp"

using namespace pqrank;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(r, c);
  for (double& v : m.data) v = nd(rng);
  return m;
}

std::vector<int> noisy_labels(std::mt19937_64& rng, const Matrix& x) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<int> y(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) y[i] = x(i, 0) - 0.5 * x(i, 1 % x.cols) + 0.7 * nd(rng) > 0.3;
  return y;
}

}  // namespace

TEST_CASE("logistic gradient matches finite differences") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd(0.0, 1.0);
  const Matrix x = random_matrix(rng, 40, 5);
  const std::vector<int> y = noisy_labels(rng, x);
  const std::vector<double> s = class_sample_weights(y, ClassWeighting::balanced);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> wb(6);
    for (double& v : wb) v = nd(rng);
    auto f = [&](std::span<const double> p) {
      return logreg_objective(x, y, s, p.first(5), p[5], 0.7);
    };
    const auto numeric = oracle::numeric_gradient(f, wb, 1e-6);
    std::vector<double> analytic(6);
    analytic[5] = logreg_gradient(x, y, s, std::span<const double>(wb).first(5), wb[5], 0.7,
                                  std::span<double>(analytic).first(5));
    CHECK(oracle::relative_error(analytic, numeric) < 1e-6);
  }
}

TEST_CASE("logistic regression basics") {
  SUBCASE("separable 1-D data ranks perfectly") {
    Matrix x(20, 1);
    std::vector<int> y(20);
    for (std::size_t i = 0; i < 20; ++i) {
      y[i] = i % 3 == 0;
      x(i, 0) = y[i] ? 1.0 : -1.0;
    }
    const LinearModel m = train_logreg(x, y);
    std::vector<double> p;
    for (std::size_t i = 0; i < 20; ++i) p.push_back(m.predict_proba(x.row(i)));
    CHECK(oracle::brute_auc(y, p) == 1.0);
  }
  SUBCASE("balanced weighting is a no-op on balanced data") {
    std::mt19937_64 rng(4);
    const Matrix x = random_matrix(rng, 60, 3);
    std::vector<int> y(60);
    for (std::size_t i = 0; i < 60; ++i) y[i] = i % 2;
    LogRegOptions none;
    none.weighting = ClassWeighting::none;
    const LinearModel a = train_logreg(x, y);
    const LinearModel b = train_logreg(x, y, none);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(a.weights[j] - b.weights[j]) < 1e-6);
    CHECK(std::abs(a.bias - b.bias) < 1e-6);
  }
  SUBCASE("zero model predicts one half and checks dimensions") {
    LinearModel m;
    m.weights = {0.0, 0.0};
    m.standardizer = Standardizer::identity(2);
    const double x[] = {3.0, -1.0};
    CHECK(m.predict_proba(x) == 0.5);
    const double bad[] = {1.0};
    CHECK_THROWS_AS(m.predict_proba(bad), Error);
  }
  SUBCASE("monotone in a positively weighted feature") {
    std::mt19937_64 rng(5);
    const Matrix x = random_matrix(rng, 80, 2);
    const LinearModel m = train_logreg(x, noisy_labels(rng, x));
    REQUIRE(m.weights[0] > 0);
    double prev = 0.0;
    for (double v = -3; v <= 3; v += 0.5) {
      const double p = m.predict_proba(std::vector<double>{v, 0.0});
      CHECK(p > prev);
      prev = p;
    }
  }
  SUBCASE("input errors") {
    Matrix x(4, 2, 1.0);
    x(1, 0) = 2.0;
    CHECK_THROWS_AS(train_logreg(x, std::vector<int>{1, 1, 1, 1}), Error);
    x(2, 1) = std::nan("");
    try {
      train_logreg(x, std::vector<int>{1, 0, 1, 0});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("column 1") != std::string::npos);
    }
  }
}

TEST_CASE("standardization absorbs affine rescaling") {
  std::mt19937_64 rng(6);
  const Matrix x = random_matrix(rng, 100, 3);
  const std::vector<int> y = noisy_labels(rng, x);
  Matrix z = x;
  const double scale[] = {1000.0, 0.001, -7.0};
  const double shift[] = {5.0, -300.0, 0.25};
  for (std::size_t i = 0; i < z.rows; ++i)
    for (std::size_t j = 0; j < 3; ++j) z(i, j) = x(i, j) * scale[j] + shift[j];
  const LinearModel a = train_logreg(x, y);
  const LinearModel b = train_logreg(z, y);
  for (std::size_t i = 0; i < x.rows; ++i)
    CHECK(std::abs(a.predict_proba(x.row(i)) - b.predict_proba(z.row(i))) < 1e-6);
}

TEST_CASE("logistic regression matches the reference fits") {
  std::ifstream in(oracle::data_dir() / "oracles" / "logreg_expected.json");
  const auto expected = nlohmann::json::parse(in);
  for (const auto& fx : expected) {
    const oracle::XY d = oracle::read_xy(oracle::data_dir() / "oracles" / fx["file"].get<std::string>());
    LogRegOptions o;
    o.C = fx["C"].get<double>();
    const LinearModel m = train_logreg(d.x, d.y, o);
    const auto w = fx["weights"].get<std::vector<double>>();
    double worst = std::abs(m.bias - fx["bias"].get<double>());
    for (std::size_t j = 0; j < w.size(); ++j) worst = std::max(worst, std::abs(m.weights[j] - w[j]));
    MESSAGE(fx["file"].get<std::string>() << " max |dw| = " << worst);
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("tree splits match exhaustive search") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 49;
    const std::size_t d = 1 + rng() % 4;
    Matrix x(n, d);
    std::vector<int> y(n);
    std::vector<double> w(n);
    const bool coarse = trial % 2 == 0;  // coarse grids force ties
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j)
        x(i, j) = coarse ? static_cast<double>(rng() % 4) : std::normal_distribution<double>()(rng);
      y[i] = static_cast<int>(rng() % 2);
      w[i] = coarse ? 1.0 : 0.1 + std::uniform_real_distribution<double>()(rng);
    }
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const SplitChoice got = best_split(x, y, w, rows);
    const auto cands = oracle::all_splits(x, y, w);
    if (cands.empty()) {
      CHECK_FALSE(got.valid);
      continue;
    }
    double best = cands.front().impurity;
    for (const oracle::SplitCandidate& c : cands) best = std::min(best, c.impurity);
    const oracle::SplitCandidate* first = nullptr;
    for (const oracle::SplitCandidate& c : cands)
      if (c.impurity <= best + 1e-12) {
        first = &c;
        break;
      }
    REQUIRE(got.valid);
    CHECK(got.impurity == doctest::Approx(best).epsilon(1e-12));
    CHECK(got.feature == first->feature);
    CHECK(got.threshold == first->threshold);
  }
}

TEST_CASE("decision tree basics") {
  Matrix x(6, 1);
  for (std::size_t i = 0; i < 6; ++i) x(i, 0) = static_cast<double>(i);
  const std::vector<int> y = {0, 0, 0, 1, 1, 1};
  const std::vector<double> w(6, 1.0);
  const DecisionTree t = train_tree(x, y, w, 1);
  REQUIRE(t.nodes.size() == 3);
  CHECK(t.nodes[0].threshold == 2.5);
  CHECK(t.depth() == 1);

  const DecisionTree pure = train_tree(x, std::vector<int>(6, 1), w, 3);
  CHECK(pure.nodes.size() == 1);
  CHECK(pure.nodes[0].is_leaf());
  CHECK(pure.predict_proba(x.row(0)) == 1.0);

  CHECK_THROWS_AS(train_tree(Matrix(0, 1), std::vector<int>{}, std::vector<double>{}, 1), Error);
  CHECK_THROWS_AS(train_tree(x, y, std::vector<double>(6, 0.0), 1), Error);
}

TEST_CASE("AdaBoost matches the reference staged decisions") {
  const oracle::XY d = oracle::read_xy(oracle::data_dir() / "oracles" / "adaboost.csv");
  const auto staged = oracle::read_csv_rows(oracle::data_dir() / "oracles" / "adaboost_staged.csv");
  std::ifstream in(oracle::data_dir() / "oracles" / "adaboost_expected.json");
  const auto meta = nlohmann::json::parse(in);
  AdaBoostOptions o;
  o.n_estimators = meta["n_estimators"].get<std::size_t>();
  const AdaBoostModel m = train_adaboost(d.x, d.y, o);
  REQUIRE(m.estimators.size() == staged.size());
  const auto alphas = meta["stage_weights"].get<std::vector<double>>();
  for (std::size_t s = 0; s < alphas.size(); ++s)
    CHECK(m.stage_weights[s] == doctest::Approx(alphas[s]).epsilon(1e-9));
  double worst = 0.0;
  for (std::size_t i = 0; i < d.x.rows; ++i) {
    const auto ours = m.staged_decision(d.x.row(i));
    for (std::size_t s = 0; s < staged.size(); ++s)
      worst = std::max(worst, std::abs(ours[s] - staged[s][i]));
  }
  MESSAGE("max staged decision gap " << worst);
  CHECK(worst < 1e-6);
}

TEST_CASE("AdaBoost properties") {
  SUBCASE("stump-separable data stops after one round") {
    Matrix x(8, 2);
    std::vector<int> y(8);
    for (std::size_t i = 0; i < 8; ++i) {
      x(i, 0) = static_cast<double>(i);
      x(i, 1) = static_cast<double>(i % 3);
      y[i] = i >= 5;
    }
    const AdaBoostModel m = train_adaboost(x, y);
    CHECK(m.estimators.size() == 1);
    for (std::size_t i = 0; i < 8; ++i) CHECK(m.predict(x.row(i)) == y[i]);
  }
  SUBCASE("training error stays under the product of stage error bounds") {
    const oracle::XY d = oracle::read_xy(oracle::data_dir() / "oracles" / "adaboost.csv");
    AdaBoostOptions o;
    o.n_estimators = 10;
    o.weighting = ClassWeighting::none;
    const AdaBoostModel m = train_adaboost(d.x, d.y, o);
    std::vector<std::size_t> errors(m.estimators.size(), 0);
    for (std::size_t i = 0; i < d.x.rows; ++i) {
      const auto st = m.staged_decision(d.x.row(i));
      for (std::size_t s = 0; s < st.size(); ++s) errors[s] += (st[s] > 0 ? 1 : 0) != d.y[i];
    }
    double bound = 1.0;
    for (std::size_t s = 0; s < errors.size(); ++s) {
      const double e = m.stage_errors[s];
      bound *= 2.0 * std::sqrt(e * (1.0 - e));
      CHECK(static_cast<double>(errors[s]) / static_cast<double>(d.x.rows) <= bound);
    }
  }
  SUBCASE("balanced weights on balanced data equal uniform weights") {
    std::mt19937_64 rng(9);
    const Matrix x = random_matrix(rng, 60, 3);
    std::vector<int> y(60);
    for (std::size_t i = 0; i < 60; ++i) y[i] = (x(i, 0) + x(i, 2) > 0) != (i % 7 == 0);
    std::vector<std::size_t> idx;
    // Keep an equal number of each class.
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < 60; ++i) (y[i] ? pos : neg)++;
    const std::size_t keep = std::min(pos, neg);
    pos = neg = 0;
    for (std::size_t i = 0; i < 60; ++i)
      if ((y[i] ? pos : neg)++ < keep) idx.push_back(i);
    Matrix xb(idx.size(), 3);
    std::vector<int> yb;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      std::copy(x.row(idx[k]).begin(), x.row(idx[k]).end(), xb.row(k).begin());
      yb.push_back(y[idx[k]]);
    }
    AdaBoostOptions bal, uni;
    bal.n_estimators = uni.n_estimators = 15;
    uni.weighting = ClassWeighting::none;
    const AdaBoostModel a = train_adaboost(xb, yb, bal);
    const AdaBoostModel b = train_adaboost(xb, yb, uni);
    REQUIRE(a.estimators.size() == b.estimators.size());
    for (std::size_t s = 0; s < a.stage_weights.size(); ++s)
      CHECK(a.stage_weights[s] == doctest::Approx(b.stage_weights[s]).epsilon(1e-12));
  }
  SUBCASE("needs both classes") {
    CHECK_THROWS_AS(train_adaboost(Matrix(3, 1, 1.0), std::vector<int>{0, 0, 0}), Error);
  }
}
