#include "pqrank/crosstask.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pqrank/errors.hpp"

namespace pqrank {
namespace {

// Splits one CSV record, reading further lines while a quoted field is open.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& lineno) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++lineno;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0;; ++i) {
    if (i == line.size()) {
      if (!quoted) break;
      if (!std::getline(in, line))
        fail(ErrorCode::format, "line " + std::to_string(lineno) + ": unterminated quoted field");
      ++lineno;
      cur += '\n';
      i = static_cast<std::size_t>(-1);
      continue;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r' || i + 1 != line.size()) {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return true;
}

}  // namespace

std::string_view task_name(TransferTask task) {
  return task == TransferTask::regression ? "regression" : "binary";
}

TransferTask parse_task(std::string_view name) {
  if (name == "regression") return TransferTask::regression;
  if (name == "binary") return TransferTask::binary;
  fail(ErrorCode::invalid_argument, "--task must be 'regression' or 'binary'");
}

void ExternalLabelSet::validate() const {
  for (std::size_t i = 0; i < items.size(); ++i) {
    const double y = items[i].label;
    if (!std::isfinite(y)) fail(ErrorCode::format, "item " + std::to_string(i) + ": non-finite label");
    if (task == TransferTask::binary && y != 0.0 && y != 1.0)
      fail(ErrorCode::format, "item " + std::to_string(i) + ": binary label must be 0 or 1");
  }
}

ExternalLabelSet load_external_labels(const std::filesystem::path& path, TransferTask task) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open label file " + path.string());
  ExternalLabelSet set;
  set.task = task;
  std::vector<std::string> f;
  std::size_t lineno = 0;
  if (!read_record(in, f, lineno) || f.size() != 2 || f[0] != "text" || f[1] != "label")
    fail(ErrorCode::format, path.string() + ": header must be 'text,label'");
  while (read_record(in, f, lineno)) {
    if (f.size() == 1 && f[0].empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (f.size() != 2) fail(ErrorCode::format, where + ": expected 2 fields");
    double y = 0.0;
    try {
      std::size_t used = 0;
      y = std::stod(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument(f[1]);
    } catch (const std::logic_error&) {
      fail(ErrorCode::format, where + ": bad label '" + f[1] + "'");
    }
    set.items.push_back({std::move(f[0]), y});
  }
  set.validate();
  return set;
}

Matrix external_embeddings(const EmbeddingStore& store, std::size_t items, std::string_view article) {
  Matrix m(items, store.dim);
  const std::string id(article);
  for (std::size_t i = 0; i < items; ++i) {
    const auto row = store.at(id, i);
    std::copy(row.begin(), row.end(), m.row(i).begin());
  }
  return m;
}

std::size_t TransferModel::dim() const {
  return task == TransferTask::regression ? weights.size() : classifier.dim();
}

double TransferModel::predict(std::span<const double> x) const {
  if (task == TransferTask::binary) return classifier.predict_proba(x);
  if (x.size() != weights.size())
    fail(ErrorCode::mismatch, "embedding dim " + std::to_string(x.size()) +
                                  " does not match transfer model dim " +
                                  std::to_string(weights.size()));
  double z = bias;
  for (std::size_t j = 0; j < x.size(); ++j) z += weights[j] * x[j];
  return z;
}

TransferModel train_transfer(const ExternalLabelSet& labels, const Matrix& embeddings,
                             const TransferOptions& options) {
  labels.validate();
  const std::size_t n = labels.items.size();
  if (n < 2) fail(ErrorCode::invalid_argument, "transfer training needs at least 2 items");
  if (embeddings.rows != n)
    fail(ErrorCode::mismatch, "embedding rows differ from the number of labeled items");
  TransferModel model;
  model.task = labels.task;
  if (labels.task == TransferTask::binary) {
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = labels.items[i].label == 1.0 ? 1 : 0;
    model.classifier = train_logreg(embeddings, y, options.logreg);
    return model;
  }
  const std::size_t d = embeddings.cols;
  Eigen::MatrixXd x(n, d);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = embeddings(i, j);
    y(static_cast<Eigen::Index>(i)) = labels.items[i].label;
  }
  const Eigen::RowVectorXd xm = x.colwise().mean();
  const double ym = y.mean();
  x.rowwise() -= xm;
  y.array() -= ym;
  Eigen::MatrixXd a = x.transpose() * x;
  a.diagonal().array() += options.ridge;
  const Eigen::VectorXd w = a.ldlt().solve(x.transpose() * y);
  model.weights.assign(w.data(), w.data() + w.size());
  model.bias = ym - xm.dot(w);
  return model;
}

std::vector<double> scale_per_article(std::span<const double> scores) {
  if (scores.empty()) fail(ErrorCode::invalid_argument, "cannot scale an empty article");
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size(), 0.5);
  if (*hi > *lo) {
    const double range = *hi - *lo;
    for (std::size_t i = 0; i < scores.size(); ++i) out[i] = (scores[i] - *lo) / range;
  }
  return out;
}

std::vector<double> percentile_ranks(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    const auto le = std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin();
    out.push_back(static_cast<double>(le) / static_cast<double>(sorted.size()));
  }
  return out;
}

std::vector<std::optional<double>> average_popularity(
    const std::vector<std::vector<std::optional<double>>>& platforms) {
  if (platforms.empty()) return {};
  const std::size_t n = platforms[0].size();
  std::vector<double> sum(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  for (const auto& p : platforms) {
    if (p.size() != n) fail(ErrorCode::mismatch, "platforms list different item counts");
    std::vector<double> vals;
    std::vector<std::size_t> who;
    for (std::size_t i = 0; i < n; ++i)
      if (p[i]) {
        vals.push_back(*p[i]);
        who.push_back(i);
      }
    const std::vector<double> pct = percentile_ranks(vals);
    for (std::size_t k = 0; k < who.size(); ++k) {
      sum[who[k]] += pct[k];
      ++count[who[k]];
    }
  }
  std::vector<std::optional<double>> out(n);
  for (std::size_t i = 0; i < n; ++i)
    if (count[i] > 0) out[i] = sum[i] / static_cast<double>(count[i]);
  return out;
}

}  // namespace pqrank
