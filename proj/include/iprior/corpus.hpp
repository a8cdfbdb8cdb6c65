#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace iprior {

using WordId = std::uint32_t;
using Document = std::vector<WordId>;
using WordSet = std::unordered_set<std::string>;

/// Bidirectional word <-> dense id mapping. Ids are assigned in first-seen
/// order and are always 0..size()-1.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words);

  WordId add(const std::string& word);
  std::optional<WordId> find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word).has_value(); }

  const std::string& word(WordId id) const { return id_to_word_.at(id); }
  const std::vector<std::string>& words() const noexcept { return id_to_word_; }
  std::size_t size() const noexcept { return id_to_word_.size(); }

  bool operator==(const Vocabulary& other) const { return id_to_word_ == other.id_to_word_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, WordId, Hash, std::equal_to<>> word_to_id_;
  std::vector<std::string> id_to_word_;
};

struct Corpus {
  std::vector<Document> documents;
  std::vector<std::string> doc_ids;  // empty or one per document
  Vocabulary vocabulary;

  std::size_t num_docs() const noexcept { return documents.size(); }
  std::size_t num_tokens() const noexcept;
  std::size_t vocab_size() const noexcept { return vocabulary.size(); }

  bool operator==(const Corpus&) const = default;
};

/// Read-only corpus statistics shared by the prior builders and the metrics.
struct CorpusStats {
  std::vector<std::uint64_t> word_count;
  std::vector<double> b;           // token count / total tokens
  std::vector<std::uint32_t> doc_freq;
  std::vector<double> avg_tfidf;   // mean of TF(w,d) * ln(N/D(w)) over docs containing w
  std::vector<std::vector<std::uint32_t>> doc_index;  // sorted document indices per word
  std::size_t n_docs = 0;
  std::size_t n_tokens = 0;

  std::size_t vocab_size() const noexcept { return b.size(); }
};

std::vector<std::string> tokenize(std::string_view raw_text, bool lowercase = true);

/// Throws Error(kAllDocumentsEmpty) when nothing survives tokenization and
/// removal, and Error(kInvalidArgument) when raw_docs is empty.
Corpus build_corpus(const std::vector<std::string>& raw_docs, const WordSet& remove_set = {},
                    std::vector<std::string> doc_ids = {});

CorpusStats compute_stats(const Corpus& corpus);

/// |doc_index(w1) ∩ doc_index(w2)|.
std::uint32_t co_doc_freq(const CorpusStats& stats, WordId w1, WordId w2);

Corpus delete_stopwords(const Corpus& corpus, const WordSet& stoplist);

/// Removes words whose average TF-IDF is strictly below the given quantile
/// (linear interpolation between order statistics). Ties at the cutoff stay,
/// so a percentile of 0 removes nothing.
Corpus delete_low_tfidf(const Corpus& corpus, double percentile = 0.05);

/// Value at fraction q of the sorted sample, interpolating linearly.
double quantile(std::vector<double> values, double q);

/// Drops every word w with drop[w] set; vocabulary ids are rebuilt densely in
/// first-seen order so no word is left with zero occurrences.
Corpus rebuild_without(const Corpus& corpus, const std::vector<bool>& drop);

}  // namespace iprior
