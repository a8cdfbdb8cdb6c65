#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iprior/corpus.hpp"
#include "iprior/matrix.hpp"

namespace iprior::synthetic {

/// Two topics over disjoint vocabularies, each document a two-topic mixture
/// dominated by one of them.
struct PlantedTopics {
  Corpus corpus;
  Matrix<double> truth;  // topics x V, over corpus ids
};

PlantedTopics planted_topics(std::size_t n_docs = 100, std::size_t doc_length = 20,
                             std::size_t words_per_topic = 10, std::uint64_t seed = 1);

struct StopwordCorpusParams {
  std::size_t n_docs = 1000;
  std::size_t doc_length = 50;
  std::size_t n_clusters = 20;
  std::size_t words_per_cluster = 40;
  std::size_t keywords_per_cluster = 1;
  std::vector<std::string> stopwords = {"the", "and", "of", "to", "a"};
  double stop_fraction = 0.4;
  double off_cluster_fraction = 0.1;
  std::uint64_t seed = 7;
};

/// Documents drawn from planted word clusters with a heavy layer of
/// stopwords in every document. The defaults give at least one cluster per
/// domain topic at K = 20 and clusters longer than a 30-word top list.
struct StopwordCorpus {
  std::vector<std::string> texts;
  std::vector<std::string> ids;
  WordSet stopwords;
  WordSet cluster_words;  // the natural expert whitelist
  WordSet keywords;       // a generic seed list: some cluster words plus unseen terms
  std::vector<std::vector<std::string>> clusters;
};

StopwordCorpus stopword_corpus(const StopwordCorpusParams& params = {});

/// Deterministic corpus of 1000 documents. Five stopwords occur in every
/// document. Each of five clusters owns a 100-document slice; its ten words
/// split into two groups of five, one group per half of the slice, so words
/// of different groups never co-occur. The remaining 500 documents hold
/// stopwords only. The first document lists the stopwords first.
struct PathologyCorpus {
  Corpus corpus;
  std::vector<WordId> stopwords;
  std::vector<std::vector<WordId>> clusters;  // group-A words then group-B words
};

PathologyCorpus pathology_corpus();

std::string cluster_word(std::size_t cluster, std::size_t index);

}  // namespace iprior::synthetic
