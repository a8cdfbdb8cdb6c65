#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "iprior/corpus.hpp"
#include "iprior/matrix.hpp"

namespace iprior {

enum class TopicKind { kStopword, kWordFrequency, kTfIdf, kKeyword, kSymmetric };

std::string_view to_string(TopicKind kind);
TopicKind parse_topic_kind(std::string_view name);

/// Row layout of a prior: stopword rows first, then word-frequency, TF-IDF and
/// keyword rows; anything left over up to num_topics is symmetric padding.
struct PriorConfig {
  int num_topics = 20;
  int stopword_topics = 1;
  int wordfreq_topics = 0;
  int tfidf_topics = 0;
  int keyword_topics = 0;
  double c1 = 1.0;        // TF-IDF scale
  double c2 = 1.0;        // keyword scale
  double c = 100.0;       // keyword boost
  double floor = 1e-6;    // smallest admissible Dirichlet weight
  double symmetric_eta = 1.0;

  // I stopword topics, the rest word-frequency topics.
  static PriorConfig wordfreq_layout(int K, int I = 1);
  // I stopword topics, the rest TF-IDF topics.
  static PriorConfig tfidf_layout(int K, int I = 1);
  // I stopword, J TF-IDF, keyword_count keyword topics.
  static PriorConfig keyword_seeding_layout(int K, int I, int J, int keyword_count);
  // Every topic keyword-seeded, no stopword or TF-IDF topic.
  static PriorConfig keyword_topics_layout(int K);
  // Plain LDA: every row is eta.
  static PriorConfig symmetric_layout(int K, double eta);

  int padding_topics() const {
    return num_topics - stopword_topics - wordfreq_topics - tfidf_topics - keyword_topics;
  }
};

struct PriorMatrix {
  Matrix<double> weights;  // K x V
  std::vector<TopicKind> kinds;

  std::size_t num_topics() const noexcept { return weights.rows(); }
  std::size_t vocab_size() const noexcept { return weights.cols(); }
  double row_sum(std::size_t k) const;

  bool operator==(const PriorMatrix&) const = default;
};

std::vector<double> stopword_prior(std::size_t V);
std::vector<double> symmetric_prior(std::size_t V, double eta);
/// weight_w = 1 / b_w
std::vector<double> wordfreq_prior(const CorpusStats& stats);
/// weight_w = max(c1 * TI(w), floor)
std::vector<double> tfidf_prior(const CorpusStats& stats, double c1, double floor);
/// weight_w = c2 * c for keywords present in the vocabulary, c2 otherwise.
/// Keywords missing from the vocabulary are dropped and counted in a log line.
std::vector<double> keyword_prior(const Vocabulary& vocab, const WordSet& keywords, double c2,
                                  double c);

PriorMatrix assemble(const PriorConfig& config, const CorpusStats& stats, const Vocabulary& vocab,
                     const WordSet& keywords = {});

struct PriorDiagnostic {
  enum class Severity { kWarning, kError } severity;
  std::string message;
};

/// Never throws. Flags non-positive weights (errors), and a warning when the
/// lightest stopword row does not outweigh the heaviest TF-IDF row.
std::vector<PriorDiagnostic> validate(const PriorMatrix& prior);

}  // namespace iprior
