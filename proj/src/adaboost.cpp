#include <cmath>

#include "pqrank/classic_ml.hpp"
#include "pqrank/errors.hpp"

namespace pqrank {

AdaBoostModel train_adaboost(const Matrix& x, std::span<const int> y,
                             const AdaBoostOptions& options,
                             std::span<const double> initial_weights) {
  if (x.rows != y.size()) fail(ErrorCode::mismatch, "feature rows and labels differ in length");
  if (options.n_estimators == 0) fail(ErrorCode::invalid_argument, "n_estimators must be positive");
  if (!(options.learning_rate > 0))
    fail(ErrorCode::invalid_argument, "learning_rate must be positive");

  std::vector<double> w;
  if (initial_weights.empty()) {
    w = class_sample_weights(y, options.weighting);
  } else {
    if (initial_weights.size() != y.size())
      fail(ErrorCode::mismatch, "initial weights differ in length from labels");
    w.assign(initial_weights.begin(), initial_weights.end());
    class_sample_weights(y, ClassWeighting::none);
  }
  auto normalize = [&w] {
    double s = 0.0;
    for (double v : w) s += v;
    if (!(s > 0)) fail(ErrorCode::numeric, "sample weights sum to zero");
    for (double& v : w) v /= s;
  };
  normalize();

  AdaBoostModel model;
  model.n_estimators = options.n_estimators;
  model.learning_rate = options.learning_rate;
  std::vector<char> wrong(x.rows);
  for (std::size_t m = 0; m < options.n_estimators; ++m) {
    DecisionTree tree = train_tree(x, y, w, options.max_depth);
    double err = 0.0, total = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
      wrong[i] = tree.predict(x.row(i)) != y[i];
      if (wrong[i]) err += w[i];
      total += w[i];
    }
    err /= total;
    if (err <= 0) {
      model.estimators.push_back(std::move(tree));
      model.stage_weights.push_back(1.0);
      model.stage_errors.push_back(0.0);
      break;
    }
    if (err >= 0.5) {
      if (model.estimators.empty())
        fail(ErrorCode::numeric, "first boosting stage is no better than chance");
      break;
    }
    const double alpha = options.learning_rate * std::log((1.0 - err) / err);
    model.estimators.push_back(std::move(tree));
    model.stage_weights.push_back(alpha);
    model.stage_errors.push_back(err);
    if (m + 1 == options.n_estimators) break;
    for (std::size_t i = 0; i < x.rows; ++i)
      if (wrong[i] && w[i] > 0) w[i] *= std::exp(alpha);
    normalize();
  }
  return model;
}

std::vector<double> AdaBoostModel::staged_decision(std::span<const double> x) const {
  std::vector<double> out;
  out.reserve(estimators.size());
  double num = 0.0, den = 0.0;
  for (std::size_t m = 0; m < estimators.size(); ++m) {
    const double h = estimators[m].predict(x) == 1 ? 1.0 : -1.0;
    num += stage_weights[m] * h;
    den += stage_weights[m];
    out.push_back(den > 0 ? num / den : 0.0);
  }
  return out;
}

double AdaBoostModel::decision(std::span<const double> x) const {
  if (estimators.empty()) fail(ErrorCode::invalid_argument, "empty boosted ensemble");
  return staged_decision(x).back();
}

double AdaBoostModel::predict_proba(std::span<const double> x) const {
  return sigmoid(decision(x));
}

}  // namespace pqrank
