#include "iprior/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iprior/error.hpp"

namespace iprior {

double coherence(std::span<const WordId> top, const CorpusStats& stats) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < top.size(); ++i) {
    const double d_i = stats.doc_freq.at(top[i]);
    for (std::size_t j = i + 1; j < top.size(); ++j) {
      total += std::log((co_doc_freq(stats, top[i], top[j]) + 1.0) / d_i);
    }
  }
  return total;
}

double pmi_score(std::span<const WordId> top, const CorpusStats& stats, bool smoothing) {
  const double n = static_cast<double>(stats.n_docs);
  std::vector<double> values;
  values.reserve(top.size() * (top.size() - 1) / 2);
  for (std::size_t i = 0; i + 1 < top.size(); ++i) {
    const double p_i = stats.doc_freq.at(top[i]) / n;
    for (std::size_t j = i + 1; j < top.size(); ++j) {
      const double joint = co_doc_freq(stats, top[i], top[j]);
      if (!smoothing && joint == 0.0) continue;
      const double p_ij = (joint + (smoothing ? 1.0 : 0.0)) / n;
      const double p_j = stats.doc_freq.at(top[j]) / n;
      values.push_back(std::log(p_ij / (p_i * p_j)));
    }
  }
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const std::size_t mid = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  return values[mid];
}

double log_lift(std::span<const double> topic, const CorpusStats& stats, std::size_t n) {
  if (topic.size() != stats.vocab_size()) {
    throw Error(ErrorCode::kDimensionMismatch, "topic and corpus statistics differ in vocabulary size");
  }
  const auto top = top_words(topic, n);
  double total = 0.0;
  for (WordId w : top) total += std::log(topic[w] / stats.b[w]);
  return total / static_cast<double>(top.size());
}

double log_lift(const FittedModel& model, std::size_t topic, const CorpusStats& stats, std::size_t n) {
  if (topic >= model.num_topics()) throw Error(ErrorCode::kInvalidArgument, "topic index out of range");
  return log_lift(model.beta_hat.row(topic), stats, n);
}

namespace {

double rate_in(std::span<const WordId> top, const Vocabulary& vocab, const WordSet& set) {
  if (top.empty()) return 0.0;
  const auto hits = std::count_if(top.begin(), top.end(),
                                  [&](WordId w) { return set.contains(vocab.word(w)); });
  return static_cast<double>(hits) / static_cast<double>(top.size());
}

}  // namespace

double stopword_rate(std::span<const WordId> top, const Vocabulary& vocab, const WordSet& stoplist) {
  return rate_in(top, vocab, stoplist);
}

double expert_word_rate(std::span<const WordId> top, const Vocabulary& vocab, const WordSet& whitelist) {
  return rate_in(top, vocab, whitelist);
}

namespace {

// Number of distinct whitelist words in each document.
std::vector<std::uint32_t> whitelist_per_doc(const WordSet& whitelist, const Corpus& corpus,
                                             const CorpusStats& stats) {
  std::vector<std::uint32_t> per_doc(corpus.num_docs(), 0);
  for (const auto& word : whitelist) {
    if (auto id = corpus.vocabulary.find(word)) {
      for (auto d : stats.doc_index[*id]) ++per_doc[d];
    }
  }
  return per_doc;
}

double codoc_with(std::span<const WordId> top, const WordSet& whitelist, const Corpus& corpus,
                  const CorpusStats& stats, const std::vector<std::uint32_t>& per_doc) {
  if (top.empty()) return 0.0;
  std::size_t hits = 0;
  for (WordId w : top) {
    const std::uint32_t self = whitelist.contains(corpus.vocabulary.word(w)) ? 1 : 0;
    const auto& docs = stats.doc_index[w];
    if (std::any_of(docs.begin(), docs.end(), [&](std::uint32_t d) { return per_doc[d] > self; })) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(top.size());
}

}  // namespace

double codocument_appearance(std::span<const WordId> top, const WordSet& whitelist,
                             const Corpus& corpus, const CorpusStats& stats) {
  return codoc_with(top, whitelist, corpus, stats, whitelist_per_doc(whitelist, corpus, stats));
}

ScoreValues mean_of(std::span<const TopicScore> scores) {
  ScoreValues m;
  if (scores.empty()) return m;
  for (const auto& s : scores) {
    m.coherence_10 += s.values.coherence_10;
    m.coherence_30 += s.values.coherence_30;
    m.pmi += s.values.pmi;
    m.log_lift += s.values.log_lift;
    m.stopword_rate += s.values.stopword_rate;
    m.expert_rate += s.values.expert_rate;
    m.codoc += s.values.codoc;
  }
  const double n = static_cast<double>(scores.size());
  m.coherence_10 /= n;
  m.coherence_30 /= n;
  m.pmi /= n;
  m.log_lift /= n;
  m.stopword_rate /= n;
  m.expert_rate /= n;
  m.codoc /= n;
  return m;
}

ModelReport report(const FittedModel& model, const Corpus& corpus, const CorpusStats& stats,
                   const WordSet& stoplist, const WordSet& whitelist, const MetricConfig& config) {
  if (model.vocabulary != corpus.vocabulary.words()) {
    throw Error(ErrorCode::kDimensionMismatch, "model vocabulary does not match the corpus vocabulary");
  }
  if (config.top_n < 2 || config.n_lift < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need top_n >= 2 and n_lift >= 1");
  }
  const auto per_doc = whitelist_per_doc(whitelist, corpus, stats);
  ModelReport out;
  out.vocab_size = corpus.vocab_size();
  const std::size_t widest = std::max<std::size_t>({config.top_n, 30, 10});
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    const auto ranked = top_words(model, k, widest);
    const std::span<const WordId> all(ranked);
    auto first = [&](std::size_t n) { return all.first(std::min(n, all.size())); };
    TopicScore s;
    s.kind = k < model.kinds.size() ? model.kinds[k] : TopicKind::kSymmetric;
    s.values.coherence_10 = coherence(first(10), stats);
    s.values.coherence_30 = coherence(first(30), stats);
    s.values.pmi = pmi_score(first(config.top_n), stats, config.pmi_smoothing);
    s.values.log_lift = log_lift(model, k, stats, config.n_lift);
    s.values.stopword_rate = stopword_rate(first(config.top_n), corpus.vocabulary, stoplist);
    s.values.expert_rate = expert_word_rate(first(config.top_n), corpus.vocabulary, whitelist);
    s.values.codoc = codoc_with(first(config.top_n), whitelist, corpus, stats, per_doc);
    out.per_topic.push_back(s);
  }
  out.mean_all = mean_of(out.per_topic);
  std::vector<TopicScore> domain;
  std::copy_if(out.per_topic.begin(), out.per_topic.end(), std::back_inserter(domain),
               [](const TopicScore& s) { return s.kind != TopicKind::kStopword; });
  if (!domain.empty()) out.mean_domain = mean_of(domain);
  return out;
}

}  // namespace iprior
