#pragma once
// Feed-forward PQ scorers over sentence (and document) embeddings:
//   A  sigmoid(f(s))
//   B  sigmoid(f([s; d]))
//   C  dot(sigmoid(experts(s)), softmax(gate(d)))   mixture of k experts
// Deep variants insert two SELU layers of `width` and `width / 2` units in
// every path; dropout acts on the first of them during training.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pqrank/matrix.hpp"

namespace pqrank {

enum class Arch { A, B, C };
enum class Depth { basic, deep };

std::string_view arch_name(Arch arch);
Arch parse_arch(std::string_view name);
std::string_view depth_name(Depth depth);
Depth parse_depth(std::string_view name);

struct NetSpec {
  Arch arch = Arch::A;
  Depth depth = Depth::basic;
  std::size_t width = 128;  // deep only
  std::size_t experts = 4;  // C only
  std::size_t input_dim = 768;
  std::uint64_t seed = 0;

  // Throws Error(invalid_argument) for empty dims, width < 2 or k < 1.
  void validate() const;
  // e.g. "C-deep(w=32,k=4)"
  std::string name() const;
  bool needs_document() const { return arch != Arch::A; }
};

std::size_t param_count(const NetSpec& spec);

constexpr double kSeluLambda = 1.0507009873554804934193349852946;
constexpr double kSeluAlpha = 1.6732632423543772848170429916717;
double selu(double x);
double selu_grad(double x);

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::size_t w = 0;  // offset of the out x in row-major weight block
  std::size_t b = 0;  // offset of the bias block
};

struct Path {
  std::vector<DenseLayer> layers;  // SELU between layers, none after the last
  std::size_t output_dim() const { return layers.back().out; }
};

// Dropout applied during a forward pass: the first hidden activation of each
// path is kept with probability 1 - rate and rescaled by 1 / (1 - rate). The
// keep decision is a pure function of (seed, example, path, unit) so a batch
// can be replayed with identical masks.
struct DropoutPlan {
  double rate = 0.5;
  std::uint64_t seed = 0;
};

class Net {
 public:
  Net() = default;
  // Fan-in scaled normal weights, zero biases, drawn from spec.seed.
  explicit Net(const NetSpec& spec);

  const NetSpec& spec() const { return spec_; }
  std::span<const double> params() const { return params_; }
  std::span<double> params() { return params_; }
  std::size_t size() const { return params_.size(); }
  const std::vector<Path>& paths() const { return paths_; }

  // Probability for one example; `doc` may be empty for architecture A.
  double forward(std::span<const double> sentence, std::span<const double> doc) const;

  // For C only: gate weights (softmax) and expert outputs (sigmoids).
  void moe_parts(std::span<const double> sentence, std::span<const double> doc,
                 std::vector<double>& gate, std::vector<double>& experts) const;

 private:
  NetSpec spec_;
  std::vector<double> params_;
  std::vector<Path> paths_;  // A/B: {main}; C: {experts, gate}
};

// Inputs for a batch: row i of `sentences` (and `documents`, for B and C)
// with label and per-sample loss weight.
struct NetData {
  const Matrix* sentences = nullptr;
  const Matrix* documents = nullptr;
  std::vector<int> labels;
  std::vector<double> weights;

  std::size_t size() const { return labels.size(); }
};

// Mean over `rows` of weight * BCE. A and B use the logit form, C clamps the
// probability to [1e-7, 1 - 1e-7]. When grad is nonempty it receives the
// exact gradient with respect to all parameters.
double batch_loss(const Net& net, const NetData& data, std::span<const std::size_t> rows,
                  const std::optional<DropoutPlan>& dropout, std::span<double> grad);

std::vector<double> predict_all(const Net& net, const Matrix& sentences, const Matrix* documents);

struct TrainConfig {
  std::size_t max_epochs = 100;
  std::size_t patience = 4;
  std::size_t batch_size = 32;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double dropout = 0.5;
  bool balanced = true;

  void validate() const;
};

struct TrainHistory {
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  std::size_t best_epoch = 0;  // 0-based
  std::size_t epochs_run = 0;
};

struct TrainedNet {
  Net net;
  TrainHistory history;
  TrainConfig config;
};

// Loss weights follow the balanced formula computed on the training labels;
// validation loss uses the same per-class weights.
TrainedNet train_net(const NetSpec& spec, const NetData& train, const NetData& validation,
                     const TrainConfig& config = {});

// Per-class weights (w0, w1) used by train_net.
std::pair<double, double> balanced_class_weights(std::span<const int> labels);

struct GridResult {
  NetSpec spec;
  std::vector<double> val_auc;  // one per trial
  double mean = 0.0;
  double stddev = 0.0;
};

struct GridSearchResult {
  std::vector<GridResult> results;
  std::size_t best = 0;
};

// Trains every spec once per seed (seed replaces spec.seed) and ranks specs
// by mean validation AUC_avg over articles delimited by `val_offsets`.
GridSearchResult grid_search(const std::vector<NetSpec>& specs, const NetData& train,
                             const NetData& validation,
                             std::span<const std::size_t> val_offsets,
                             std::span<const std::uint64_t> seeds, const TrainConfig& config = {},
                             unsigned threads = 1);

// Hyperparameter grid searched for one architecture/depth.
std::vector<NetSpec> default_grid(Arch arch, Depth depth, std::size_t input_dim);

// "PQNET1\n", a JSON header line, then little-endian float32 parameters.
void save_net(const std::filesystem::path& path, const TrainedNet& trained);
TrainedNet load_net(const std::filesystem::path& path);

}  // namespace pqrank
