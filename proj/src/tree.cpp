#include <algorithm>
#include <cmath>
#include <numeric>

#include "pqrank/classic_ml.hpp"
#include "pqrank/errors.hpp"

namespace pqrank {

double weighted_gini(double w0, double w1) {
  const double total = w0 + w1;
  if (total <= 0) return 0.0;
  const double p0 = w0 / total;
  const double p1 = w1 / total;
  return 1.0 - p0 * p0 - p1 * p1;
}

SplitChoice best_split(const Matrix& x, std::span<const int> y, std::span<const double> w,
                       std::span<const std::size_t> rows) {
  SplitChoice best;
  double total0 = 0.0, total1 = 0.0;
  for (std::size_t r : rows) (y[r] == 1 ? total1 : total0) += w[r];
  const double total = total0 + total1;
  if (total <= 0 || rows.size() < 2) return best;

  std::vector<std::size_t> order(rows.begin(), rows.end());
  for (std::size_t f = 0; f < x.cols; ++f) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
    double left0 = 0.0, left1 = 0.0;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      const std::size_t r = order[k];
      (y[r] == 1 ? left1 : left0) += w[r];
      const double a = x(r, f);
      const double b = x(order[k + 1], f);
      if (!(a < b)) continue;
      const double right0 = total0 - left0;
      const double right1 = total1 - left1;
      const double wl = left0 + left1;
      const double wr = right0 + right1;
      const double impurity =
          (wl * weighted_gini(left0, left1) + wr * weighted_gini(right0, right1)) / total;
      double threshold = a / 2.0 + b / 2.0;
      if (threshold == b) threshold = a;
      // Near-equal impurities count as ties so rounding cannot beat the lower feature/threshold.
      if (!best.valid || impurity < best.impurity - 1e-12) {
        best = {true, f, threshold, impurity};
      }
    }
  }
  return best;
}

namespace {

struct TreeBuilder {
  const Matrix& x;
  std::span<const int> y;
  std::span<const double> w;
  int max_depth;
  DecisionTree tree;

  int build(std::vector<std::size_t> rows, int depth) {
    TreeNode node;
    node.depth = depth;
    double w0 = 0.0, w1 = 0.0;
    for (std::size_t r : rows) (y[r] == 1 ? w1 : w0) += w[r];
    node.weight = w0 + w1;
    if (node.weight > 0) {
      node.p0 = w0 / node.weight;
      node.p1 = w1 / node.weight;
    }
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(node);
    if (depth >= max_depth || w0 <= 0 || w1 <= 0) return id;
    const SplitChoice split = best_split(x, y, w, rows);
    if (!split.valid) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows)
      (x(r, split.feature) <= split.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(std::move(left), depth + 1);
    const int rr = build(std::move(right), depth + 1);
    TreeNode& n = tree.nodes[static_cast<std::size_t>(id)];
    n.feature = static_cast<int>(split.feature);
    n.threshold = split.threshold;
    n.left = l;
    n.right = rr;
    return id;
  }
};

}  // namespace

DecisionTree train_tree(const Matrix& x, std::span<const int> y,
                        std::span<const double> sample_weights, int max_depth) {
  if (x.rows != y.size() || sample_weights.size() != y.size())
    fail(ErrorCode::mismatch, "tree inputs differ in length");
  if (max_depth < 1) fail(ErrorCode::invalid_argument, "max_depth must be at least 1");
  if (x.rows == 0) fail(ErrorCode::invalid_argument, "cannot fit a tree on zero rows");
  double total = 0.0;
  for (double w : sample_weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      fail(ErrorCode::invalid_argument, "sample weights must be finite and non-negative");
    total += w;
  }
  if (!(total > 0.0)) fail(ErrorCode::invalid_argument, "sample weights sum to zero");
  TreeBuilder b{x, y, sample_weights, max_depth, {}};
  b.tree.max_depth = max_depth;
  std::vector<std::size_t> rows(x.rows);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  b.build(std::move(rows), 0);
  return std::move(b.tree);
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
  if (nodes.empty()) fail(ErrorCode::invalid_argument, "empty decision tree");
  const TreeNode* n = &nodes[0];
  while (!n->is_leaf()) {
    if (static_cast<std::size_t>(n->feature) >= x.size())
      fail(ErrorCode::mismatch, "feature vector too short for decision tree");
    n = &nodes[static_cast<std::size_t>(x[static_cast<std::size_t>(n->feature)] <= n->threshold
                                            ? n->left
                                            : n->right)];
  }
  return *n;
}

int DecisionTree::depth() const {
  int d = 0;
  for (const TreeNode& n : nodes) d = std::max(d, n.depth);
  return d;
}

}  // namespace pqrank
