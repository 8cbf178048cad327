#pragma once
// Logistic regression, weighted decision trees and SAMME AdaBoost.

#include <cstddef>
#include <span>
#include <vector>

#include "pqrank/matrix.hpp"

namespace pqrank {

enum class ClassWeighting { balanced, none };

// Per-sample weights: n_samples / (2 * n_class) under `balanced`, 1 otherwise.
// Throws Error(invalid_argument) unless both classes are present.
std::vector<double> class_sample_weights(std::span<const int> y, ClassWeighting weighting);

// Feature standardization (population standard deviation). Constant
// columns keep scale 1 and are marked frozen.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;
  std::vector<bool> frozen;

  static Standardizer fit(const Matrix& x);
  static Standardizer identity(std::size_t dim);
  std::size_t dim() const { return mean.size(); }
  void apply(std::span<const double> x, std::span<double> out) const;
  Matrix apply(const Matrix& x) const;
};

struct LinearModel {
  std::vector<double> weights;  // in standardized space
  double bias = 0.0;
  Standardizer standardizer;
  double l2_strength = 1.0;  // lambda = 1 / C

  std::size_t dim() const { return weights.size(); }
  double decision(std::span<const double> x) const;
  // sigmoid(w . standardize(x) + b); throws Error(mismatch) on dimension mismatch.
  double predict_proba(std::span<const double> x) const;
};

struct LogRegOptions {
  ClassWeighting weighting = ClassWeighting::balanced;
  double C = 1.0;
  bool standardize = true;
  // Full-batch adaptive-moment descent.
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t max_epochs = 5000;
  double tolerance = 1e-6;  // stop once every gradient component is below this
};

struct LogRegTrace {
  std::size_t epochs = 0;
  double final_loss = 0.0;
};

// Objective on already-standardized features:
//   (1/S) * [ sum_i s_i * BCE(y_i, sigmoid(w.x_i + b)) + (lambda/2) * |w|^2 ],  S = sum_i s_i.
// Frozen columns are excluded from the gradient.
double logreg_objective(const Matrix& xs, std::span<const int> y, std::span<const double> s,
                        std::span<const double> w, double b, double lambda);
// Gradient of logreg_objective: d/dw into grad_w, returns d/db.
double logreg_gradient(const Matrix& xs, std::span<const int> y, std::span<const double> s,
                       std::span<const double> w, double b, double lambda,
                       std::span<double> grad_w);

LinearModel train_logreg(const Matrix& x, std::span<const int> y, const LogRegOptions& options = {},
                         LogRegTrace* trace = nullptr);

double sigmoid(double z);

// ---------------------------------------------------------------------------

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  double p0 = 0.5;  // weighted class probabilities at this node
  double p1 = 0.5;
  double weight = 0.0;
  int depth = 0;

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  int max_depth = 1;

  const TreeNode& leaf_for(std::span<const double> x) const;
  double predict_proba(std::span<const double> x) const { return leaf_for(x).p1; }
  // Class 1 only when it strictly outweighs class 0.
  int predict(std::span<const double> x) const { return leaf_for(x).p1 > leaf_for(x).p0 ? 1 : 0; }
  int depth() const;
};

double weighted_gini(double w0, double w1);

struct SplitChoice {
  bool valid = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity = 0.0;  // weight-averaged child Gini
};

// Best weighted-Gini split of the given rows: ties go to the lowest feature
// index, then the lowest threshold. Thresholds are midpoints between
// consecutive distinct values.
SplitChoice best_split(const Matrix& x, std::span<const int> y, std::span<const double> w,
                       std::span<const std::size_t> rows);

DecisionTree train_tree(const Matrix& x, std::span<const int> y,
                        std::span<const double> sample_weights, int max_depth);

// ---------------------------------------------------------------------------

struct AdaBoostOptions {
  std::size_t n_estimators = 100;
  double learning_rate = 1.0;
  int max_depth = 1;
  ClassWeighting weighting = ClassWeighting::balanced;  // initial sample weights
};

struct AdaBoostModel {
  std::vector<DecisionTree> estimators;
  std::vector<double> stage_weights;
  std::vector<double> stage_errors;
  std::size_t n_estimators = 100;
  double learning_rate = 1.0;

  // sum_m alpha_m * h_m(x) / sum_m alpha_m with h in {-1, +1}.
  double decision(std::span<const double> x) const;
  // Decision after each stage (prefix sums).
  std::vector<double> staged_decision(std::span<const double> x) const;
  // sigmoid(decision(x)).
  double predict_proba(std::span<const double> x) const;
  int predict(std::span<const double> x) const { return decision(x) > 0 ? 1 : 0; }
};

// SAMME: err_m = weighted error, alpha_m = learning_rate * ln((1 - err_m) / err_m),
// misclassified weights scaled by exp(alpha_m) and renormalized. Stops when a
// stage fits perfectly (kept with weight 1) or reaches err >= 0.5 (discarded).
AdaBoostModel train_adaboost(const Matrix& x, std::span<const int> y,
                             const AdaBoostOptions& options = {},
                             std::span<const double> initial_weights = {});

}  // namespace pqrank
