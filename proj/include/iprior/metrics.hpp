#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iprior/corpus.hpp"
#include "iprior/priors.hpp"
#include "iprior/sampler.hpp"

namespace iprior {

struct MetricConfig {
  std::size_t top_n = 30;   // words scored for PMI and the stopword/expert/codoc rates
  std::size_t n_lift = 30;
  bool pmi_smoothing = true;
};

struct ScoreValues {
  double coherence_10 = 0.0;
  double coherence_30 = 0.0;
  double pmi = 0.0;
  double log_lift = 0.0;
  double stopword_rate = 0.0;
  double expert_rate = 0.0;
  double codoc = 0.0;
};

struct TopicScore {
  ScoreValues values;
  TopicKind kind = TopicKind::kSymmetric;
};

struct ModelReport {
  std::vector<TopicScore> per_topic;
  ScoreValues mean_all;
  std::optional<ScoreValues> mean_domain;  // absent when every topic is a stopword topic
  std::size_t vocab_size = 0;
};

/// Sum over ordered pairs i < j of ln((D(v_i, v_j) + 1) / D(v_i)); the list
/// must be ordered by descending topic probability.
double coherence(std::span<const WordId> top, const CorpusStats& stats);

/// Median (lower median for even counts) of the pairwise document-level PMI.
/// Without smoothing, pairs that never co-occur are left out; if none
/// remain the result is -infinity.
double pmi_score(std::span<const WordId> top, const CorpusStats& stats, bool smoothing = true);

/// Mean of ln(beta_w / b_w) over the n most probable words of the topic.
double log_lift(std::span<const double> topic, const CorpusStats& stats, std::size_t n);
double log_lift(const FittedModel& model, std::size_t topic, const CorpusStats& stats, std::size_t n);

double stopword_rate(std::span<const WordId> top, const Vocabulary& vocab, const WordSet& stoplist);
double expert_word_rate(std::span<const WordId> top, const Vocabulary& vocab, const WordSet& whitelist);

/// Fraction of top words that share at least one document with a whitelist
/// word other than themselves.
double codocument_appearance(std::span<const WordId> top, const WordSet& whitelist,
                             const Corpus& corpus, const CorpusStats& stats);

ModelReport report(const FittedModel& model, const Corpus& corpus, const CorpusStats& stats,
                   const WordSet& stoplist, const WordSet& whitelist, const MetricConfig& config = {});

ScoreValues mean_of(std::span<const TopicScore> scores);

}  // namespace iprior
