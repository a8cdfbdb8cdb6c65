#include "iprior/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iprior/error.hpp"

namespace iprior {

Vocabulary::Vocabulary(std::vector<std::string> words) {
  for (auto& w : words) {
    if (word_to_id_.contains(w)) {
      throw Error(ErrorCode::kParse, "duplicate vocabulary word '" + w + "'");
    }
    add(w);
  }
}

WordId Vocabulary::add(const std::string& word) {
  auto [it, inserted] = word_to_id_.try_emplace(word, static_cast<WordId>(id_to_word_.size()));
  if (inserted) id_to_word_.push_back(word);
  return it->second;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = word_to_id_.find(word);
  if (it == word_to_id_.end()) return std::nullopt;
  return it->second;
}

std::size_t Corpus::num_tokens() const noexcept {
  std::size_t n = 0;
  for (const auto& doc : documents) n += doc.size();
  return n;
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

std::vector<std::string> tokenize(std::string_view raw_text, bool lowercase) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < raw_text.size()) {
    while (i < raw_text.size() && is_space(raw_text[i])) ++i;
    std::size_t j = i;
    while (j < raw_text.size() && !is_space(raw_text[j])) ++j;
    if (j > i) {
      std::string token(raw_text.substr(i, j - i));
      if (lowercase) std::transform(token.begin(), token.end(), token.begin(), ascii_lower);
      tokens.push_back(std::move(token));
    }
    i = j;
  }
  return tokens;
}

Corpus build_corpus(const std::vector<std::string>& raw_docs, const WordSet& remove_set,
                    std::vector<std::string> doc_ids) {
  if (raw_docs.empty()) throw Error(ErrorCode::kInvalidArgument, "no documents given");
  if (!doc_ids.empty() && doc_ids.size() != raw_docs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "doc_ids must match documents one-to-one");
  }
  Corpus corpus;
  corpus.doc_ids = std::move(doc_ids);
  corpus.documents.reserve(raw_docs.size());
  for (const auto& raw : raw_docs) {
    Document doc;
    for (const auto& token : tokenize(raw, true)) {
      if (remove_set.contains(token)) continue;
      doc.push_back(corpus.vocabulary.add(token));
    }
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.vocab_size() == 0) {
    throw Error(ErrorCode::kAllDocumentsEmpty, "every document is empty after tokenization");
  }
  return corpus;
}

CorpusStats compute_stats(const Corpus& corpus) {
  const std::size_t V = corpus.vocab_size();
  CorpusStats s;
  s.n_docs = corpus.num_docs();
  s.word_count.assign(V, 0);
  s.doc_freq.assign(V, 0);
  s.doc_index.assign(V, {});
  std::vector<double> tf_sum(V, 0.0);

  std::vector<std::uint32_t> local(V, 0);
  std::vector<WordId> touched;
  for (std::uint32_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& doc = corpus.documents[d];
    touched.clear();
    for (WordId w : doc) {
      if (local[w]++ == 0) touched.push_back(w);
    }
    std::sort(touched.begin(), touched.end());
    const double len = static_cast<double>(doc.size());
    for (WordId w : touched) {
      s.word_count[w] += local[w];
      s.doc_freq[w] += 1;
      s.doc_index[w].push_back(d);
      tf_sum[w] += local[w] / len;
      local[w] = 0;
    }
    s.n_tokens += doc.size();
  }

  s.b.resize(V);
  s.avg_tfidf.resize(V);
  const double n_docs = static_cast<double>(s.n_docs);
  for (WordId w = 0; w < V; ++w) {
    s.b[w] = static_cast<double>(s.word_count[w]) / static_cast<double>(s.n_tokens);
    const double df = s.doc_freq[w];
    // ln(N/N) is exactly 0, so universal words get TI == 0 with no rounding.
    const double idf = s.doc_freq[w] == s.n_docs ? 0.0 : std::log(n_docs / df);
    s.avg_tfidf[w] = tf_sum[w] / df * idf;
  }
  return s;
}

std::uint32_t co_doc_freq(const CorpusStats& stats, WordId w1, WordId w2) {
  const auto& a = stats.doc_index.at(w1);
  const auto& b = stats.doc_index.at(w2);
  std::uint32_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

Corpus rebuild_without(const Corpus& corpus, const std::vector<bool>& drop) {
  Corpus out;
  out.doc_ids = corpus.doc_ids;
  out.documents.reserve(corpus.num_docs());
  for (const auto& doc : corpus.documents) {
    Document kept;
    kept.reserve(doc.size());
    for (WordId w : doc) {
      if (!drop[w]) kept.push_back(out.vocabulary.add(corpus.vocabulary.word(w)));
    }
    out.documents.push_back(std::move(kept));
  }
  if (out.vocab_size() == 0) {
    throw Error(ErrorCode::kAllDocumentsEmpty, "every document is empty after word deletion");
  }
  return out;
}

Corpus delete_stopwords(const Corpus& corpus, const WordSet& stoplist) {
  std::vector<bool> drop(corpus.vocab_size());
  for (WordId w = 0; w < drop.size(); ++w) drop[w] = stoplist.contains(corpus.vocabulary.word(w));
  return rebuild_without(corpus, drop);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

Corpus delete_low_tfidf(const Corpus& corpus, double percentile) {
  if (!(percentile >= 0.0 && percentile < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tf-idf deletion percentile must lie in [0, 1)");
  }
  const CorpusStats stats = compute_stats(corpus);
  const double cutoff = quantile(stats.avg_tfidf, percentile);
  std::vector<bool> drop(corpus.vocab_size());
  for (WordId w = 0; w < drop.size(); ++w) drop[w] = stats.avg_tfidf[w] < cutoff;
  return rebuild_without(corpus, drop);
}

}  // namespace iprior
