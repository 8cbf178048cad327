#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "pqrank/errors.hpp"
#include "pqrank/eval.hpp"
#include "pqrank/neural.hpp"
#include "pqrank/parallel.hpp"

namespace pqrank {
namespace {

constexpr char kNetMagic[] = "PQNET1";

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

NetData with_weights(const NetData& d, double w0, double w1) {
  NetData out = d;
  out.weights.resize(d.labels.size());
  for (std::size_t i = 0; i < d.labels.size(); ++i) out.weights[i] = d.labels[i] == 1 ? w1 : w0;
  return out;
}

void check_data(const NetData& d, const NetSpec& spec, const char* what) {
  if (!d.sentences) fail(ErrorCode::invalid_argument, std::string(what) + " set has no sentence matrix");
  if (d.sentences->rows != d.labels.size())
    fail(ErrorCode::mismatch, std::string(what) + " sentence rows differ from label count");
  if (spec.needs_document() && (!d.documents || d.documents->rows != d.labels.size()))
    fail(ErrorCode::mismatch, std::string(what) + " set needs one document row per sentence");
}

class Adam {
 public:
  Adam(std::size_t n, const TrainConfig& c) : m_(n, 0.0), v_(n, 0.0), c_(c) {}

  void step(std::span<double> params, std::span<const double> grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(c_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(c_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = c_.beta1 * m_[i] + (1 - c_.beta1) * grad[i];
      v_[i] = c_.beta2 * v_[i] + (1 - c_.beta2) * grad[i] * grad[i];
      params[i] -= c_.learning_rate * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + c_.epsilon);
    }
  }

 private:
  std::vector<double> m_, v_;
  TrainConfig c_;
  std::size_t t_ = 0;
};

nlohmann::json spec_json(const NetSpec& s) {
  return {{"arch", std::string(arch_name(s.arch))},
          {"depth", std::string(depth_name(s.depth))},
          {"width", s.width},
          {"experts", s.experts},
          {"input_dim", s.input_dim},
          {"seed", s.seed}};
}

NetSpec spec_from_json(const nlohmann::json& j) {
  NetSpec s;
  s.arch = parse_arch(j.at("arch").get<std::string>());
  s.depth = parse_depth(j.at("depth").get<std::string>());
  s.width = j.at("width").get<std::size_t>();
  s.experts = j.at("experts").get<std::size_t>();
  s.input_dim = j.at("input_dim").get<std::size_t>();
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

}  // namespace

void TrainConfig::validate() const {
  if (max_epochs == 0) fail(ErrorCode::invalid_argument, "max_epochs must be positive");
  if (patience >= max_epochs) fail(ErrorCode::invalid_argument, "patience must be below max_epochs");
  if (batch_size == 0) fail(ErrorCode::invalid_argument, "batch size must be positive");
  if (!(dropout >= 0 && dropout < 1)) fail(ErrorCode::invalid_argument, "dropout must lie in [0, 1)");
  if (!(learning_rate > 0)) fail(ErrorCode::invalid_argument, "learning rate must be positive");
}

std::pair<double, double> balanced_class_weights(std::span<const int> labels) {
  std::size_t n1 = 0;
  for (int y : labels) n1 += y == 1 ? 1 : 0;
  const std::size_t n0 = labels.size() - n1;
  if (n0 == 0 || n1 == 0) fail(ErrorCode::invalid_argument, "training data must contain both classes");
  const double n = static_cast<double>(labels.size());
  return {n / (2.0 * static_cast<double>(n0)), n / (2.0 * static_cast<double>(n1))};
}

TrainedNet train_net(const NetSpec& spec, const NetData& train, const NetData& validation,
                     const TrainConfig& config) {
  config.validate();
  check_data(train, spec, "training");
  check_data(validation, spec, "validation");
  if (validation.size() == 0) fail(ErrorCode::invalid_argument, "validation set is empty");

  auto [w0, w1] = config.balanced ? balanced_class_weights(train.labels) : std::pair{1.0, 1.0};
  const NetData tr = with_weights(train, w0, w1);
  const NetData va = with_weights(validation, w0, w1);

  TrainedNet out{Net(spec), {}, config};
  Net& net = out.net;
  TrainHistory& h = out.history;
  std::vector<double> grad(net.size());
  std::vector<double> best_params(net.params().begin(), net.params().end());
  Adam adam(net.size(), config);

  std::vector<std::size_t> order(tr.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> val_rows(va.size());
  std::iota(val_rows.begin(), val_rows.end(), std::size_t{0});
  std::mt19937_64 shuffle_rng(mix64(spec.seed ^ 0x5348554646ULL));

  double best = std::numeric_limits<double>::infinity();
  std::size_t wait = 0;
  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0, batch = 0; start < order.size(); start += config.batch_size, ++batch) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const std::span<const std::size_t> rows(order.data() + start, end - start);
      std::optional<DropoutPlan> plan;
      if (config.dropout > 0 && spec.depth == Depth::deep)
        plan = DropoutPlan{config.dropout, mix64(spec.seed ^ mix64((epoch << 32) ^ batch))};
      const double loss = batch_loss(net, tr, rows, plan, grad);
      if (!std::isfinite(loss))
        fail(ErrorCode::numeric, "training diverged (non-finite loss) at epoch " + std::to_string(epoch + 1));
      epoch_loss += loss * static_cast<double>(rows.size());
      adam.step(net.params(), grad);
    }
    h.train_loss.push_back(epoch_loss / static_cast<double>(order.size()));
    const double val = batch_loss(net, va, val_rows, std::nullopt, {});
    if (!std::isfinite(val))
      fail(ErrorCode::numeric, "validation loss is non-finite at epoch " + std::to_string(epoch + 1));
    h.val_loss.push_back(val);
    h.epochs_run = epoch + 1;
    if (val < best) {
      best = val;
      h.best_epoch = epoch;
      std::copy(net.params().begin(), net.params().end(), best_params.begin());
      wait = 0;
    } else if (++wait >= config.patience) {
      break;
    }
  }
  std::copy(best_params.begin(), best_params.end(), net.params().begin());
  return out;
}

GridSearchResult grid_search(const std::vector<NetSpec>& specs, const NetData& train,
                             const NetData& validation,
                             std::span<const std::size_t> val_offsets,
                             std::span<const std::uint64_t> seeds, const TrainConfig& config,
                             unsigned threads) {
  if (specs.empty()) fail(ErrorCode::invalid_argument, "grid search needs at least one spec");
  if (seeds.empty()) fail(ErrorCode::invalid_argument, "grid search needs at least one seed");
  const std::size_t t = seeds.size();
  std::vector<double> aucs(specs.size() * t);
  parallel_for(aucs.size(), threads, [&](std::size_t job) {
    NetSpec spec = specs[job / t];
    spec.seed = seeds[job % t];
    const TrainedNet trained = train_net(spec, train, validation, config);
    const std::vector<double> p =
        predict_all(trained.net, *validation.sentences, validation.documents);
    aucs[job] = grouped_auc_avg(validation.labels, p, val_offsets);
  });

  GridSearchResult out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    GridResult r;
    r.spec = specs[i];
    r.val_auc.assign(aucs.begin() + static_cast<std::ptrdiff_t>(i * t),
                     aucs.begin() + static_cast<std::ptrdiff_t>((i + 1) * t));
    r.mean = std::accumulate(r.val_auc.begin(), r.val_auc.end(), 0.0) / static_cast<double>(t);
    double ss = 0.0;
    for (double a : r.val_auc) ss += (a - r.mean) * (a - r.mean);
    r.stddev = std::sqrt(ss / static_cast<double>(t));
    if (out.results.empty() || r.mean > out.results[out.best].mean) out.best = out.results.size();
    out.results.push_back(std::move(r));
  }
  return out;
}

std::vector<NetSpec> default_grid(Arch arch, Depth depth, std::size_t input_dim) {
  const std::vector<std::size_t> widths{16, 32, 64, 128, 256, 512};
  const std::vector<std::size_t> experts{2, 4, 8, 16};
  std::vector<NetSpec> out;
  const std::vector<std::size_t> ws = depth == Depth::deep ? widths : std::vector<std::size_t>{128};
  const std::vector<std::size_t> ks = arch == Arch::C ? experts : std::vector<std::size_t>{4};
  for (std::size_t w : ws)
    for (std::size_t k : ks) {
      NetSpec s;
      s.arch = arch;
      s.depth = depth;
      s.width = w;
      s.experts = k;
      s.input_dim = input_dim;
      out.push_back(s);
    }
  return out;
}

void save_net(const std::filesystem::path& path, const TrainedNet& trained) {
  const Net& net = trained.net;
  const TrainConfig& c = trained.config;
  nlohmann::json header = {
      {"spec", spec_json(net.spec())},
      {"train",
       {{"max_epochs", c.max_epochs},
        {"patience", c.patience},
        {"batch_size", c.batch_size},
        {"learning_rate", c.learning_rate},
        {"beta1", c.beta1},
        {"beta2", c.beta2},
        {"epsilon", c.epsilon},
        {"dropout", c.dropout},
        {"balanced", c.balanced}}},
      {"history",
       {{"best_epoch", trained.history.best_epoch},
        {"epochs_run", trained.history.epochs_run},
        {"train_loss", trained.history.train_loss},
        {"val_loss", trained.history.val_loss}}},
      {"param_count", net.size()}};
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  out << kNetMagic << '\n' << header.dump() << '\n';
  std::vector<float> blob(net.params().begin(), net.params().end());
  out.write(reinterpret_cast<const char*>(blob.data()),
            static_cast<std::streamsize>(blob.size() * sizeof(float)));
  if (!out) fail(ErrorCode::io, "failed writing " + path.string());
}

TrainedNet load_net(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open network " + path.string());
  std::string magic, header_line;
  if (!std::getline(in, magic) || magic != kNetMagic)
    fail(ErrorCode::format, path.string() + ": not a PQNET1 network file");
  if (!std::getline(in, header_line)) fail(ErrorCode::format, path.string() + ": missing header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(header_line);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::format, path.string() + ": bad header: " + e.what());
  }
  TrainedNet t;
  try {
    t.net = Net(spec_from_json(h.at("spec")));
    const auto& c = h.at("train");
    t.config.max_epochs = c.at("max_epochs");
    t.config.patience = c.at("patience");
    t.config.batch_size = c.at("batch_size");
    t.config.learning_rate = c.at("learning_rate");
    t.config.beta1 = c.at("beta1");
    t.config.beta2 = c.at("beta2");
    t.config.epsilon = c.at("epsilon");
    t.config.dropout = c.at("dropout");
    t.config.balanced = c.at("balanced");
    const auto& hist = h.at("history");
    t.history.best_epoch = hist.at("best_epoch");
    t.history.epochs_run = hist.at("epochs_run");
    t.history.train_loss = hist.at("train_loss").get<std::vector<double>>();
    t.history.val_loss = hist.at("val_loss").get<std::vector<double>>();
    if (h.at("param_count").get<std::size_t>() != t.net.size())
      fail(ErrorCode::format, path.string() + ": parameter count does not match spec");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::format, path.string() + ": bad header: " + e.what());
  }
  std::vector<float> blob(t.net.size());
  if (!in.read(reinterpret_cast<char*>(blob.data()),
               static_cast<std::streamsize>(blob.size() * sizeof(float))))
    fail(ErrorCode::format, path.string() + ": truncated parameter blob");
  if (in.peek() != std::char_traits<char>::eof())
    fail(ErrorCode::format, path.string() + ": trailing bytes after parameters");
  auto params = t.net.params();
  for (std::size_t i = 0; i < blob.size(); ++i) {
    if (!std::isfinite(blob[i])) fail(ErrorCode::format, path.string() + ": non-finite parameter");
    params[i] = blob[i];
  }
  return t;
}

}  // namespace pqrank
