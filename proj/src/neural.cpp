#include "pqrank/neural.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pqrank/classic_ml.hpp"
#include "pqrank/errors.hpp"
#include "pqrank/simd/kernels.hpp"

namespace pqrank {
namespace {

constexpr double kClamp = 1e-7;

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double keep_scale(const DropoutPlan& plan, std::size_t example, std::size_t path,
                  std::size_t unit) {
  const std::uint64_t h =
      mix64(plan.seed ^ mix64((example << 20) ^ (path << 16) ^ static_cast<std::uint64_t>(unit)));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return u < plan.rate ? 0.0 : 1.0 / (1.0 - plan.rate);
}

Path make_path(std::size_t in, const NetSpec& spec, std::size_t out, std::size_t& offset) {
  std::vector<std::size_t> dims{in};
  if (spec.depth == Depth::deep) {
    dims.push_back(spec.width);
    dims.push_back(spec.width / 2);
  }
  dims.push_back(out);
  Path p;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    DenseLayer layer{dims[l], dims[l + 1], offset, offset + dims[l] * dims[l + 1]};
    offset = layer.b + layer.out;
    p.layers.push_back(layer);
  }
  return p;
}

std::vector<Path> make_paths(const NetSpec& spec, std::size_t& total) {
  total = 0;
  std::vector<Path> paths;
  switch (spec.arch) {
    case Arch::A:
      paths.push_back(make_path(spec.input_dim, spec, 1, total));
      break;
    case Arch::B:
      paths.push_back(make_path(2 * spec.input_dim, spec, 1, total));
      break;
    case Arch::C:
      paths.push_back(make_path(spec.input_dim, spec, spec.experts, total));
      paths.push_back(make_path(spec.input_dim, spec, spec.experts, total));
      break;
  }
  return paths;
}

// Activations of one path for one example.
struct PathTrace {
  std::vector<std::vector<double>> inputs;  // inputs[l] feeds layer l
  std::vector<std::vector<double>> pre;     // pre-activations of layer l
  std::vector<double> mask;                 // dropout scale on the first hidden layer

  explicit PathTrace(const Path& p) {
    for (const DenseLayer& l : p.layers) {
      inputs.emplace_back(l.in);
      pre.emplace_back(l.out);
    }
    mask.assign(p.layers.size() > 1 ? p.layers[0].out : 0, 1.0);
  }
};

void path_forward(const Path& path, const double* params, std::span<const double> x,
                  PathTrace& t, const DropoutPlan* dropout, std::size_t example,
                  std::size_t path_id) {
  const auto& k = simd::kernels();
  std::copy(x.begin(), x.end(), t.inputs[0].begin());
  const std::size_t last = path.layers.size() - 1;
  for (std::size_t l = 0; l <= last; ++l) {
    const DenseLayer& L = path.layers[l];
    k.gemv(params + L.w, L.out, L.in, t.inputs[l].data(), params + L.b, t.pre[l].data());
    if (l == last) break;
    std::vector<double>& next = t.inputs[l + 1];
    for (std::size_t j = 0; j < L.out; ++j) next[j] = selu(t.pre[l][j]);
    if (l == 0) {
      for (std::size_t j = 0; j < L.out; ++j) {
        t.mask[j] = dropout ? keep_scale(*dropout, example, path_id, j) : 1.0;
        next[j] *= t.mask[j];
      }
    }
  }
}

void path_backward(const Path& path, const double* params, const PathTrace& t,
                   std::vector<double> g, double* grad) {
  const auto& k = simd::kernels();
  for (std::size_t l = path.layers.size(); l-- > 0;) {
    const DenseLayer& L = path.layers[l];
    k.ger_acc(grad + L.w, L.out, L.in, g.data(), t.inputs[l].data());
    k.axpy(1.0, g.data(), grad + L.b, L.out);
    if (l == 0) break;
    std::vector<double> gin(L.in, 0.0);
    k.gemv_t_acc(params + L.w, L.out, L.in, g.data(), gin.data());
    for (std::size_t j = 0; j < L.in; ++j) {
      gin[j] *= selu_grad(t.pre[l - 1][j]);
      if (l == 1) gin[j] *= t.mask[j];
    }
    g = std::move(gin);
  }
}

void softmax(std::span<const double> v, std::vector<double>& out) {
  out.resize(v.size());
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += out[i] = std::exp(v[i] - m);
  for (double& x : out) x /= s;
}

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

void check_input(const NetSpec& spec, std::span<const double> s, std::span<const double> d) {
  if (s.size() != spec.input_dim)
    fail(ErrorCode::mismatch, "sentence vector has dim " + std::to_string(s.size()) +
                                  ", network expects " + std::to_string(spec.input_dim));
  if (spec.needs_document() && d.size() != spec.input_dim)
    fail(ErrorCode::mismatch, d.empty() ? "architecture " + std::string(arch_name(spec.arch)) +
                                              " needs a document vector"
                                        : "document vector has dim " + std::to_string(d.size()) +
                                              ", network expects " +
                                              std::to_string(spec.input_dim));
}

}  // namespace

std::string_view arch_name(Arch arch) {
  switch (arch) {
    case Arch::A:
      return "A";
    case Arch::B:
      return "B";
    case Arch::C:
      return "C";
  }
  return "?";
}

Arch parse_arch(std::string_view name) {
  if (name == "A" || name == "a") return Arch::A;
  if (name == "B" || name == "b") return Arch::B;
  if (name == "C" || name == "c") return Arch::C;
  fail(ErrorCode::invalid_argument, "unknown architecture '" + std::string(name) + "'");
}

std::string_view depth_name(Depth depth) { return depth == Depth::basic ? "basic" : "deep"; }

Depth parse_depth(std::string_view name) {
  if (name == "basic") return Depth::basic;
  if (name == "deep") return Depth::deep;
  fail(ErrorCode::invalid_argument, "unknown depth '" + std::string(name) + "'");
}

void NetSpec::validate() const {
  if (input_dim == 0) fail(ErrorCode::invalid_argument, "input dim must be positive");
  if (depth == Depth::deep && width < 2)
    fail(ErrorCode::invalid_argument, "deep networks need width >= 2");
  if (arch == Arch::C && experts < 1) fail(ErrorCode::invalid_argument, "need at least one expert");
}

std::string NetSpec::name() const {
  std::string s = std::string(arch_name(arch)) + "-" + std::string(depth_name(depth));
  std::string extra;
  if (depth == Depth::deep) extra = "w=" + std::to_string(width);
  if (arch == Arch::C) extra += (extra.empty() ? "" : ",") + std::string("k=") + std::to_string(experts);
  return extra.empty() ? s : s + "(" + extra + ")";
}

std::size_t param_count(const NetSpec& spec) {
  spec.validate();
  std::size_t total = 0;
  make_paths(spec, total);
  return total;
}

double selu(double x) { return x > 0 ? kSeluLambda * x : kSeluLambda * kSeluAlpha * std::expm1(x); }

double selu_grad(double x) { return x > 0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(x); }

Net::Net(const NetSpec& spec) : spec_(spec) {
  spec.validate();
  std::size_t total = 0;
  paths_ = make_paths(spec, total);
  params_.assign(total, 0.0);
  std::mt19937_64 rng(spec.seed);
  for (const Path& p : paths_)
    for (const DenseLayer& l : p.layers) {
      std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(l.in)));
      for (std::size_t i = 0; i < l.in * l.out; ++i) params_[l.w + i] = normal(rng);
    }
}

void Net::moe_parts(std::span<const double> sentence, std::span<const double> doc,
                    std::vector<double>& gate, std::vector<double>& experts) const {
  if (spec_.arch != Arch::C) fail(ErrorCode::invalid_argument, "moe_parts needs architecture C");
  check_input(spec_, sentence, doc);
  PathTrace te(paths_[0]), tg(paths_[1]);
  path_forward(paths_[0], params_.data(), sentence, te, nullptr, 0, 0);
  path_forward(paths_[1], params_.data(), doc, tg, nullptr, 0, 1);
  experts = te.pre.back();
  for (double& e : experts) e = sigmoid(e);
  softmax(tg.pre.back(), gate);
}

double Net::forward(std::span<const double> sentence, std::span<const double> doc) const {
  check_input(spec_, sentence, doc);
  if (spec_.arch == Arch::C) {
    std::vector<double> gate, experts;
    moe_parts(sentence, doc, gate, experts);
    double p = 0.0;
    for (std::size_t i = 0; i < gate.size(); ++i) p += gate[i] * experts[i];
    return p;
  }
  PathTrace t(paths_[0]);
  if (spec_.arch == Arch::B) {
    std::vector<double> x(sentence.begin(), sentence.end());
    x.insert(x.end(), doc.begin(), doc.end());
    path_forward(paths_[0], params_.data(), x, t, nullptr, 0, 0);
  } else {
    path_forward(paths_[0], params_.data(), sentence, t, nullptr, 0, 0);
  }
  return sigmoid(t.pre.back()[0]);
}

double batch_loss(const Net& net, const NetData& data, std::span<const std::size_t> rows,
                  const std::optional<DropoutPlan>& dropout, std::span<double> grad) {
  if (rows.empty()) fail(ErrorCode::invalid_argument, "empty batch");
  const NetSpec& spec = net.spec();
  const bool want_grad = !grad.empty();
  if (want_grad) {
    if (grad.size() != net.size()) fail(ErrorCode::mismatch, "gradient buffer has wrong size");
    std::fill(grad.begin(), grad.end(), 0.0);
  }
  if (spec.needs_document() && !data.documents)
    fail(ErrorCode::mismatch, "architecture " + std::string(arch_name(spec.arch)) +
                                  " needs document embeddings");
  const DropoutPlan* plan = dropout ? &*dropout : nullptr;
  const double* params = net.params().data();
  const auto& paths = net.paths();
  const double inv_n = 1.0 / static_cast<double>(rows.size());

  std::vector<PathTrace> traces;
  for (const Path& p : paths) traces.emplace_back(p);
  std::vector<double> concat, gate, experts;
  double total = 0.0;
  for (std::size_t r : rows) {
    const auto s = data.sentences->row(r);
    const std::span<const double> d =
        data.documents ? data.documents->row(r) : std::span<const double>{};
    check_input(spec, s, d);
    const double y = data.labels[r];
    const double w = data.weights[r];
    if (spec.arch != Arch::C) {
      std::span<const double> x = s;
      if (spec.arch == Arch::B) {
        concat.assign(s.begin(), s.end());
        concat.insert(concat.end(), d.begin(), d.end());
        x = concat;
      }
      path_forward(paths[0], params, x, traces[0], plan, r, 0);
      const double z = traces[0].pre.back()[0];
      total += w * (softplus(z) - y * z);
      if (want_grad)
        path_backward(paths[0], params, traces[0], {w * (sigmoid(z) - y) * inv_n}, grad.data());
      continue;
    }
    path_forward(paths[0], params, s, traces[0], plan, r, 0);
    path_forward(paths[1], params, d, traces[1], plan, r, 1);
    const std::size_t k = spec.experts;
    experts = traces[0].pre.back();
    for (double& e : experts) e = sigmoid(e);
    softmax(traces[1].pre.back(), gate);
    double p = 0.0;
    for (std::size_t i = 0; i < k; ++i) p += gate[i] * experts[i];
    const double pc = std::clamp(p, kClamp, 1.0 - kClamp);
    total += -w * (y * std::log(pc) + (1 - y) * std::log(1 - pc));
    if (!want_grad) continue;
    const double dp = (p == pc) ? w * (-y / p + (1 - y) / (1 - p)) * inv_n : 0.0;
    std::vector<double> gu(k), gv(k);
    for (std::size_t i = 0; i < k; ++i) {
      gu[i] = dp * gate[i] * experts[i] * (1 - experts[i]);
      gv[i] = dp * gate[i] * (experts[i] - p);
    }
    path_backward(paths[0], params, traces[0], std::move(gu), grad.data());
    path_backward(paths[1], params, traces[1], std::move(gv), grad.data());
  }
  return total * inv_n;
}

std::vector<double> predict_all(const Net& net, const Matrix& sentences, const Matrix* documents) {
  if (net.spec().needs_document() && !documents)
    fail(ErrorCode::mismatch, "architecture " + std::string(arch_name(net.spec().arch)) +
                                  " needs document embeddings");
  std::vector<double> out(sentences.rows);
  for (std::size_t i = 0; i < sentences.rows; ++i)
    out[i] = net.forward(sentences.row(i),
                         documents ? documents->row(i) : std::span<const double>{});
  return out;
}

}  // namespace pqrank
