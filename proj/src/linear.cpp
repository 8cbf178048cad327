#include <algorithm>
#include <cmath>

#include "pqrank/classic_ml.hpp"
#include "pqrank/errors.hpp"
#include "pqrank/simd/kernels.hpp"

namespace pqrank {
namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

void check_labels(const Matrix& x, std::span<const int> y) {
  if (x.rows != y.size()) fail(ErrorCode::mismatch, "feature rows and labels differ in length");
  for (int v : y)
    if (v != 0 && v != 1) fail(ErrorCode::invalid_argument, "labels must be 0 or 1");
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> class_sample_weights(std::span<const int> y, ClassWeighting weighting) {
  std::size_t n1 = 0;
  for (int v : y) n1 += v == 1 ? 1 : 0;
  const std::size_t n0 = y.size() - n1;
  if (n0 == 0 || n1 == 0)
    fail(ErrorCode::invalid_argument, "training data must contain both classes");
  std::vector<double> w(y.size(), 1.0);
  if (weighting == ClassWeighting::balanced) {
    const double n = static_cast<double>(y.size());
    const double w0 = n / (2.0 * static_cast<double>(n0));
    const double w1 = n / (2.0 * static_cast<double>(n1));
    for (std::size_t i = 0; i < y.size(); ++i) w[i] = y[i] == 1 ? w1 : w0;
  }
  return w;
}

Standardizer Standardizer::fit(const Matrix& x) {
  Standardizer s;
  s.mean.assign(x.cols, 0.0);
  s.scale.assign(x.cols, 1.0);
  s.frozen.assign(x.cols, false);
  if (x.rows == 0) return s;
  const double n = static_cast<double>(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) s.mean[j] += x(i, j);
  for (double& m : s.mean) m /= n;
  std::vector<double> var(x.cols, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) {
      const double d = x(i, j) - s.mean[j];
      var[j] += d * d;
    }
  for (std::size_t j = 0; j < x.cols; ++j) {
    const double sd = std::sqrt(var[j] / n);
    if (sd > 1e-12 * std::max(1.0, std::abs(s.mean[j]))) {
      s.scale[j] = sd;
    } else {
      s.frozen[j] = true;
    }
  }
  return s;
}

Standardizer Standardizer::identity(std::size_t dim) {
  Standardizer s;
  s.mean.assign(dim, 0.0);
  s.scale.assign(dim, 1.0);
  s.frozen.assign(dim, false);
  return s;
}

void Standardizer::apply(std::span<const double> x, std::span<double> out) const {
  for (std::size_t j = 0; j < mean.size(); ++j)
    out[j] = frozen[j] ? 0.0 : (x[j] - mean[j]) / scale[j];
}

Matrix Standardizer::apply(const Matrix& x) const {
  Matrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) apply(x.row(i), out.row(i));
  return out;
}

double LinearModel::decision(std::span<const double> x) const {
  if (x.size() != weights.size())
    fail(ErrorCode::mismatch, "feature dimension " + std::to_string(x.size()) +
                                  " does not match model dimension " +
                                  std::to_string(weights.size()));
  std::vector<double> z(x.size());
  standardizer.apply(x, z);
  return simd::dot(weights, z) + bias;
}

double LinearModel::predict_proba(std::span<const double> x) const { return sigmoid(decision(x)); }

double logreg_objective(const Matrix& xs, std::span<const int> y, std::span<const double> s,
                        std::span<const double> w, double b, double lambda) {
  const auto& k = simd::kernels();
  std::vector<double> z(xs.rows);
  k.gemv(xs.data.data(), xs.rows, xs.cols, w.data(), nullptr, z.data());
  double total = 0.0;
  double weight = 0.0;
  for (std::size_t i = 0; i < xs.rows; ++i) {
    const double zi = z[i] + b;
    total += s[i] * (softplus(zi) - y[i] * zi);
    weight += s[i];
  }
  total += 0.5 * lambda * k.dot(w.data(), w.data(), w.size());
  return total / weight;
}

double logreg_gradient(const Matrix& xs, std::span<const int> y, std::span<const double> s,
                       std::span<const double> w, double b, double lambda,
                       std::span<double> grad_w) {
  const auto& k = simd::kernels();
  std::vector<double> r(xs.rows);
  k.gemv(xs.data.data(), xs.rows, xs.cols, w.data(), nullptr, r.data());
  double weight = 0.0;
  double grad_b = 0.0;
  for (std::size_t i = 0; i < xs.rows; ++i) {
    r[i] = s[i] * (sigmoid(r[i] + b) - y[i]);
    grad_b += r[i];
    weight += s[i];
  }
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  k.gemv_t_acc(xs.data.data(), xs.rows, xs.cols, r.data(), grad_w.data());
  for (std::size_t j = 0; j < w.size(); ++j) grad_w[j] = (grad_w[j] + lambda * w[j]) / weight;
  return grad_b / weight;
}

LinearModel train_logreg(const Matrix& x, std::span<const int> y, const LogRegOptions& options,
                         LogRegTrace* trace) {
  check_labels(x, y);
  if (!(options.C > 0)) fail(ErrorCode::invalid_argument, "C must be positive");
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j)
      if (!std::isfinite(x(i, j)))
        fail(ErrorCode::invalid_argument, "non-finite value in feature column " +
                                              std::to_string(j) + " (row " + std::to_string(i) +
                                              ")");
  const std::vector<double> s = class_sample_weights(y, options.weighting);

  LinearModel model;
  model.l2_strength = 1.0 / options.C;
  model.standardizer =
      options.standardize ? Standardizer::fit(x) : Standardizer::identity(x.cols);
  const Matrix xs = model.standardizer.apply(x);
  model.weights.assign(x.cols, 0.0);

  const std::size_t d = x.cols;
  std::vector<double> grad(d), m(d + 1, 0.0), v(d + 1, 0.0);
  std::size_t epoch = 0;
  for (; epoch < options.max_epochs; ++epoch) {
    const double grad_b =
        logreg_gradient(xs, y, s, model.weights, model.bias, model.l2_strength, grad);
    double largest = std::abs(grad_b);
    for (std::size_t j = 0; j < d; ++j)
      if (!model.standardizer.frozen[j]) largest = std::max(largest, std::abs(grad[j]));
    if (!std::isfinite(largest)) fail(ErrorCode::numeric, "logistic regression diverged");
    if (largest < options.tolerance) break;

    const double t = static_cast<double>(epoch + 1);
    const double c1 = 1.0 - std::pow(options.beta1, t);
    const double c2 = 1.0 - std::pow(options.beta2, t);
    auto step = [&](std::size_t k, double g) {
      m[k] = options.beta1 * m[k] + (1 - options.beta1) * g;
      v[k] = options.beta2 * v[k] + (1 - options.beta2) * g * g;
      return options.learning_rate * (m[k] / c1) / (std::sqrt(v[k] / c2) + options.epsilon);
    };
    for (std::size_t j = 0; j < d; ++j) {
      if (model.standardizer.frozen[j]) continue;
      model.weights[j] -= step(j, grad[j]);
    }
    model.bias -= step(d, grad_b);
  }
  if (trace) {
    trace->epochs = epoch;
    trace->final_loss = logreg_objective(xs, y, s, model.weights, model.bias, model.l2_strength);
  }
  return model;
}

}  // namespace pqrank
