#include "iprior/priors.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "iprior/error.hpp"
#include "iprior/log.hpp"

namespace iprior {

std::string_view to_string(TopicKind kind) {
  switch (kind) {
    case TopicKind::kStopword: return "stopword";
    case TopicKind::kWordFrequency: return "wordfreq";
    case TopicKind::kTfIdf: return "tfidf";
    case TopicKind::kKeyword: return "keyword";
    case TopicKind::kSymmetric: return "symmetric";
  }
  return "symmetric";
}

TopicKind parse_topic_kind(std::string_view name) {
  for (auto kind : {TopicKind::kStopword, TopicKind::kWordFrequency, TopicKind::kTfIdf,
                    TopicKind::kKeyword, TopicKind::kSymmetric}) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorCode::kParse, "unknown topic kind '" + std::string(name) + "'");
}

PriorConfig PriorConfig::wordfreq_layout(int K, int I) {
  PriorConfig c;
  c.num_topics = K;
  c.stopword_topics = I;
  c.wordfreq_topics = K - I;
  return c;
}

PriorConfig PriorConfig::tfidf_layout(int K, int I) {
  PriorConfig c;
  c.num_topics = K;
  c.stopword_topics = I;
  c.tfidf_topics = K - I;
  return c;
}

PriorConfig PriorConfig::keyword_seeding_layout(int K, int I, int J, int keyword_count) {
  PriorConfig c;
  c.num_topics = K;
  c.stopword_topics = I;
  c.tfidf_topics = J;
  c.keyword_topics = keyword_count;
  return c;
}

PriorConfig PriorConfig::keyword_topics_layout(int K) {
  PriorConfig c;
  c.num_topics = K;
  c.stopword_topics = 0;
  c.keyword_topics = K;
  return c;
}

PriorConfig PriorConfig::symmetric_layout(int K, double eta) {
  PriorConfig c;
  c.num_topics = K;
  c.stopword_topics = 0;
  c.symmetric_eta = eta;
  return c;
}

double PriorMatrix::row_sum(std::size_t k) const {
  double s = 0.0;
  for (double x : weights.row(k)) s += x;
  return s;
}

std::vector<double> stopword_prior(std::size_t V) { return std::vector<double>(V, 1.0); }

std::vector<double> symmetric_prior(std::size_t V, double eta) { return std::vector<double>(V, eta); }

std::vector<double> wordfreq_prior(const CorpusStats& stats) {
  std::vector<double> w(stats.vocab_size());
  for (std::size_t v = 0; v < w.size(); ++v) w[v] = 1.0 / stats.b[v];
  return w;
}

std::vector<double> tfidf_prior(const CorpusStats& stats, double c1, double floor) {
  std::vector<double> w(stats.vocab_size());
  for (std::size_t v = 0; v < w.size(); ++v) w[v] = std::max(c1 * stats.avg_tfidf[v], floor);
  return w;
}

std::vector<double> keyword_prior(const Vocabulary& vocab, const WordSet& keywords, double c2,
                                  double c) {
  std::vector<double> w(vocab.size(), c2);
  std::size_t matched = 0;
  for (const auto& kw : keywords) {
    if (auto id = vocab.find(kw)) {
      w[*id] = c2 * c;
      ++matched;
    }
  }
  if (!keywords.empty() && matched < keywords.size()) {
    std::ostringstream msg;
    msg << (keywords.size() - matched) << " of " << keywords.size()
        << " keywords are not in the vocabulary and were ignored";
    log_warning(msg.str());
  }
  if (matched == 0) log_warning("no keyword occurs in the vocabulary; keyword rows are symmetric");
  return w;
}

namespace {

void check_config(const PriorConfig& config) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kConfigMismatch, what); };
  if (config.num_topics < 1) fail("number of topics must be at least 1");
  if (config.stopword_topics < 0 || config.wordfreq_topics < 0 || config.tfidf_topics < 0 ||
      config.keyword_topics < 0) {
    fail("topic counts must be non-negative");
  }
  if (config.padding_topics() < 0) {
    std::ostringstream msg;
    msg << "stopword (" << config.stopword_topics << ") + wordfreq (" << config.wordfreq_topics
        << ") + tfidf (" << config.tfidf_topics << ") + keyword (" << config.keyword_topics
        << ") topics exceed K = " << config.num_topics;
    fail(msg.str());
  }
  if (!(config.c1 > 0 && config.c2 > 0 && config.c > 0 && config.floor > 0 &&
        config.symmetric_eta > 0)) {
    fail("c1, c2, c, floor and symmetric eta must be positive");
  }
}

}  // namespace

PriorMatrix assemble(const PriorConfig& config, const CorpusStats& stats, const Vocabulary& vocab,
                     const WordSet& keywords) {
  check_config(config);
  if (stats.vocab_size() != vocab.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "corpus statistics and vocabulary differ in size");
  }
  const std::size_t V = vocab.size();
  PriorMatrix prior{Matrix<double>(static_cast<std::size_t>(config.num_topics), V), {}};
  std::size_t k = 0;
  auto emit = [&](int count, TopicKind kind, const std::vector<double>& row) {
    for (int i = 0; i < count; ++i, ++k) {
      std::copy(row.begin(), row.end(), prior.weights.row(k).begin());
      prior.kinds.push_back(kind);
    }
  };
  if (config.stopword_topics > 0) emit(config.stopword_topics, TopicKind::kStopword, stopword_prior(V));
  if (config.wordfreq_topics > 0) emit(config.wordfreq_topics, TopicKind::kWordFrequency, wordfreq_prior(stats));
  if (config.tfidf_topics > 0) {
    emit(config.tfidf_topics, TopicKind::kTfIdf, tfidf_prior(stats, config.c1, config.floor));
  }
  if (config.keyword_topics > 0) {
    emit(config.keyword_topics, TopicKind::kKeyword, keyword_prior(vocab, keywords, config.c2, config.c));
  }
  if (config.padding_topics() > 0) {
    emit(config.padding_topics(), TopicKind::kSymmetric, symmetric_prior(V, config.symmetric_eta));
  }
  return prior;
}

std::vector<PriorDiagnostic> validate(const PriorMatrix& prior) {
  std::vector<PriorDiagnostic> out;
  if (prior.kinds.size() != prior.num_topics()) {
    out.push_back({PriorDiagnostic::Severity::kError, "kinds and weight rows differ in count"});
  }
  double stop_mass = std::numeric_limits<double>::infinity();
  double tfidf_mass = 0.0;
  bool has_stop = false;
  bool has_tfidf = false;
  for (std::size_t k = 0; k < prior.num_topics(); ++k) {
    const auto row = prior.weights.row(k);
    const auto bad = std::count_if(row.begin(), row.end(), [](double x) { return !(x > 0.0); });
    if (bad > 0) {
      std::ostringstream msg;
      msg << "topic " << k << " has " << bad << " non-positive weights";
      out.push_back({PriorDiagnostic::Severity::kError, msg.str()});
    }
    if (k >= prior.kinds.size()) continue;
    if (prior.kinds[k] == TopicKind::kStopword) {
      stop_mass = std::min(stop_mass, prior.row_sum(k));
      has_stop = true;
    }
    if (prior.kinds[k] == TopicKind::kTfIdf) {
      tfidf_mass = std::max(tfidf_mass, prior.row_sum(k));
      has_tfidf = true;
    }
  }
  if (has_tfidf && (!has_stop || stop_mass <= tfidf_mass)) {
    std::ostringstream msg;
    msg << "stopword-topic prior weight " << (has_stop ? stop_mass : 0.0)
        << " does not exceed TF-IDF-topic prior weight " << tfidf_mass
        << "; stopwords may leak into domain topics";
    out.push_back({PriorDiagnostic::Severity::kWarning, msg.str()});
  }
  return out;
}

}  // namespace iprior
