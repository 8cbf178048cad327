#include "pqrank/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "pqrank/errors.hpp"
#include "pqrank/eval.hpp"
#include "pqrank/handcrafted.hpp"
#include "pqrank/parallel.hpp"

namespace pqrank {

std::vector<HistogramBin> class_histograms(std::span<const double> values,
                                           std::span<const int> labels, std::size_t bins) {
  if (values.size() != labels.size()) fail(ErrorCode::mismatch, "values and labels differ in length");
  if (values.empty()) fail(ErrorCode::invalid_argument, "no values to histogram");
  if (bins == 0) fail(ErrorCode::invalid_argument, "need at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].left = lo + width * static_cast<double>(b);
    out[b].right = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
  }
  double npos = 0, nneg = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto b = static_cast<std::size_t>((values[i] - lo) / width);
    b = std::min(b, bins - 1);
    (labels[i] != 0 ? out[b].density_pos : out[b].density_neg) += 1.0;
    (labels[i] != 0 ? npos : nneg) += 1.0;
  }
  for (HistogramBin& h : out) {
    if (npos > 0) h.density_pos /= npos;
    if (nneg > 0) h.density_neg /= nneg;
  }
  return out;
}

std::vector<HistogramBin> feature_distributions(std::string_view feature,
                                                const std::vector<Article>& articles,
                                                const Lexicons& lexicons, std::size_t bins,
                                                unsigned threads) {
  const std::size_t col = handcrafted_feature_index(feature);
  const Matrix x = extract_corpus(articles, lexicons, threads);
  std::vector<double> v(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) v[i] = x(i, col);
  return class_histograms(v, corpus_labels(articles), bins);
}

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins) {
  char buf[160];
  out << "bin_left,bin_right,density_pos,density_neg\n";
  for (const HistogramBin& b : bins) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", b.left, b.right, b.density_pos,
                  b.density_neg);
    out << buf;
  }
}

std::vector<std::string> probe_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2) out.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) && u < 0x80) {
      cur += static_cast<char>(std::tolower(u));
    } else if (c == '_') {
      cur += c;
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::vector<TermWeights> tfidf_documents(const std::vector<std::string>& documents,
                                         const WordList& stopwords, int max_n) {
  std::vector<std::map<std::string, double>> tf(documents.size());
  std::map<std::string, double> df;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    std::vector<std::string> toks;
    for (std::string& t : probe_tokens(documents[d]))
      if (!stopwords.contains(t)) toks.push_back(std::move(t));
    for (int n = 1; n <= max_n; ++n)
      for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= toks.size(); ++i) {
        std::string g = toks[i];
        for (int k = 1; k < n; ++k) g += ' ' + toks[i + static_cast<std::size_t>(k)];
        tf[d][g] += 1.0;
      }
    for (const auto& [g, c] : tf[d]) df[g] += 1.0;
  }
  const double n = static_cast<double>(documents.size());
  std::vector<TermWeights> out(documents.size());
  for (std::size_t d = 0; d < documents.size(); ++d) {
    double norm = 0.0;
    for (const auto& [g, c] : tf[d]) {
      const double w = (1.0 + std::log(c)) * (std::log((1.0 + n) / (1.0 + df[g])) + 1.0);
      out[d].emplace_back(g, w);
      norm += w * w;
    }
    norm = std::sqrt(norm);
    if (norm > 0)
      for (auto& [g, w] : out[d]) w /= norm;
  }
  return out;
}

ProbeData probe_data(const std::vector<Article>& articles, const Matrix& embeddings) {
  if (embeddings.rows != sentence_count(articles))
    fail(ErrorCode::mismatch, "embedding rows differ from sentence count");
  ProbeData p;
  p.embeddings = &embeddings;
  p.labels = corpus_labels(articles);
  p.offsets = article_offsets(articles);
  for (const Article& a : articles)
    for (const Sentence& s : a.sentences) p.texts.push_back(s.text);
  return p;
}

DimensionProbe probe_dimension(std::size_t dim, const ProbeData& train, const ProbeData& test,
                               const ProbeOptions& options) {
  if (!train.embeddings || !test.embeddings) fail(ErrorCode::invalid_argument, "probe needs embeddings");
  if (dim >= train.embeddings->cols || dim >= test.embeddings->cols)
    fail(ErrorCode::invalid_argument, "dimension " + std::to_string(dim) + " out of range");
  const std::size_t col[] = {dim};
  const Matrix xtr = train.embeddings->select_columns(col);
  const Matrix xte = test.embeddings->select_columns(col);
  const Standardizer st = Standardizer::fit(xtr);
  if (st.frozen[0])
    fail(ErrorCode::invalid_argument, "dimension " + std::to_string(dim) + " is constant");
  const LinearModel model = train_logreg(xtr, train.labels, options.logreg);

  DimensionProbe probe;
  probe.dim = dim;
  probe.sign = model.weights[0] < 0 ? -1 : 1;
  std::vector<double> pred(xte.rows);
  for (std::size_t i = 0; i < xte.rows; ++i) pred[i] = model.predict_proba(xte.row(i));
  probe.auc_avg = grouped_auc_avg(test.labels, pred, test.offsets);

  const std::size_t n = xte.rows;
  probe.k = std::min(options.k, n / 4);
  if (probe.k == 0) fail(ErrorCode::invalid_argument, "test set too small for a probe");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xte(a, 0) > xte(b, 0); });
  const std::size_t k = probe.k;
  const std::size_t mid = k + (n - 4 * k) / 2;
  std::vector<std::string> docs(3);
  auto add = [&](std::size_t g, std::size_t from, std::size_t to) {
    for (std::size_t r = from; r < to; ++r) {
      if (!docs[g].empty()) docs[g] += ' ';
      docs[g] += test.texts.at(order[r]);
    }
  };
  add(0, 0, k);
  add(1, mid, mid + 2 * k);
  add(2, n - k, n);
  const WordList& stops = options.stopwords ? *options.stopwords : Lexicons::bundled().stopwords;
  std::vector<TermWeights> tfidf = tfidf_documents(docs, stops, 3);
  TermWeights terms = std::move(tfidf[probe.sign > 0 ? 0 : 2]);
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (terms.size() > options.top_terms) terms.resize(options.top_terms);
  probe.top_terms = std::move(terms);
  return probe;
}

std::vector<DimensionProbe> probe_dimensions(std::span<const std::size_t> dims,
                                             const ProbeData& train, const ProbeData& test,
                                             const ProbeOptions& options, unsigned threads) {
  if (!options.stopwords) (void)Lexicons::bundled();
  std::vector<DimensionProbe> out(dims.size());
  parallel_for(dims.size(), threads,
               [&](std::size_t i) { out[i] = probe_dimension(dims[i], train, test, options); });
  std::stable_sort(out.begin(), out.end(), [](const DimensionProbe& a, const DimensionProbe& b) {
    return a.auc_avg > b.auc_avg;
  });
  return out;
}

void write_probe_csv(std::ostream& out, const std::vector<DimensionProbe>& probes) {
  char buf[64];
  out << "dim,auc_avg,sign,term,rank,weight\n";
  for (const DimensionProbe& p : probes) {
    std::snprintf(buf, sizeof buf, "%.6f", p.auc_avg);
    const std::string auc = buf;
    for (std::size_t r = 0; r < p.top_terms.size(); ++r) {
      std::snprintf(buf, sizeof buf, "%.6f", p.top_terms[r].second);
      out << p.dim << ',' << auc << ',' << (p.sign > 0 ? "+" : "-") << ',' << p.top_terms[r].first
          << ',' << r + 1 << ',' << buf << '\n';
    }
  }
}

}  // namespace pqrank
