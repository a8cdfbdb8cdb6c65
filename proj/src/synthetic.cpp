#include "iprior/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "iprior/rng.hpp"

namespace iprior::synthetic {

namespace {

std::size_t draw(Rng& rng, const std::vector<double>& cumulative) {
  const double u = rng.uniform() * cumulative.back();
  std::size_t i = 0;
  while (i + 1 < cumulative.size() && cumulative[i] <= u) ++i;
  return i;
}

std::vector<double> zipf_cumulative(std::size_t n, double exponent) {
  std::vector<double> c(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
    c[i] = total;
  }
  return c;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

std::string cluster_word(std::size_t cluster, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "c%zuw%02zu", cluster, index);
  return buf;
}

PlantedTopics planted_topics(std::size_t n_docs, std::size_t doc_length, std::size_t words_per_topic,
                             std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0x70);
  const auto cumulative = zipf_cumulative(words_per_topic, 1.0);
  std::vector<std::string> texts;
  for (std::size_t d = 0; d < n_docs; ++d) {
    const std::size_t dominant = rng.below(2);
    const double share = 0.7 + 0.3 * rng.uniform();
    std::vector<std::string> words;
    for (std::size_t i = 0; i < doc_length; ++i) {
      const std::size_t topic = rng.uniform() < share ? dominant : 1 - dominant;
      words.push_back(cluster_word(topic, draw(rng, cumulative)));
    }
    texts.push_back(join(words));
  }
  PlantedTopics out{build_corpus(texts), {}};
  out.truth = Matrix<double>(2, out.corpus.vocab_size());
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t i = 0; i < words_per_topic; ++i) {
      const double prev = i == 0 ? 0.0 : cumulative[i - 1];
      if (auto id = out.corpus.vocabulary.find(cluster_word(t, i))) {
        out.truth(t, *id) = (cumulative[i] - prev) / cumulative.back();
      }
    }
  }
  return out;
}

StopwordCorpus stopword_corpus(const StopwordCorpusParams& p) {
  Rng rng = Rng::stream(p.seed, 0x5709);
  StopwordCorpus out;
  out.stopwords = WordSet(p.stopwords.begin(), p.stopwords.end());
  out.clusters.resize(p.n_clusters);
  for (std::size_t c = 0; c < p.n_clusters; ++c) {
    for (std::size_t i = 0; i < p.words_per_cluster; ++i) {
      out.clusters[c].push_back(cluster_word(c, i));
      out.cluster_words.insert(out.clusters[c].back());
    }
    for (std::size_t i = 0; i < std::min(p.keywords_per_cluster, p.words_per_cluster); ++i) {
      out.keywords.insert(out.clusters[c][i]);
    }
  }
  for (const char* unseen : {"xylophone", "quasar", "marmalade"}) out.keywords.insert(unseen);

  const auto stop_cum = zipf_cumulative(p.stopwords.size(), 0.5);
  const auto word_cum = zipf_cumulative(p.words_per_cluster, 0.8);
  for (std::size_t d = 0; d < p.n_docs; ++d) {
    const std::size_t primary = d % p.n_clusters;
    std::vector<std::string> words;
    for (std::size_t i = 0; i < p.doc_length; ++i) {
      if (rng.uniform() < p.stop_fraction) {
        words.push_back(p.stopwords[draw(rng, stop_cum)]);
        continue;
      }
      std::size_t c = primary;
      if (p.n_clusters > 1 && rng.uniform() < p.off_cluster_fraction) {
        c = (primary + 1 + rng.below(p.n_clusters - 1)) % p.n_clusters;
      }
      words.push_back(out.clusters[c][draw(rng, word_cum)]);
    }
    out.texts.push_back(join(words));
    out.ids.push_back("doc" + std::to_string(d));
  }
  return out;
}

PathologyCorpus pathology_corpus() {
  const std::vector<std::string> stop = {"the", "and", "of", "to", "a"};
  constexpr std::size_t kDocs = 1000;
  constexpr std::size_t kClusters = 5;
  constexpr std::size_t kSlice = 100;
  constexpr std::size_t kGroup = 5;
  std::vector<std::string> texts;
  for (std::size_t d = 0; d < kDocs; ++d) {
    std::vector<std::string> words = stop;
    if (d < kClusters * kSlice) {
      const std::size_t c = d / kSlice;
      const std::size_t group = (d % kSlice) < kSlice / 2 ? 0 : 1;
      for (std::size_t i = 0; i < kGroup; ++i) words.push_back(cluster_word(c, group * kGroup + i));
    }
    texts.push_back(join(words));
  }
  PathologyCorpus out{build_corpus(texts), {}, {}};
  for (const auto& s : stop) out.stopwords.push_back(*out.corpus.vocabulary.find(s));
  out.clusters.resize(kClusters);
  for (std::size_t c = 0; c < kClusters; ++c) {
    for (std::size_t i = 0; i < 2 * kGroup; ++i) {
      out.clusters[c].push_back(*out.corpus.vocabulary.find(cluster_word(c, i)));
    }
  }
  return out;
}

}  // namespace iprior::synthetic
