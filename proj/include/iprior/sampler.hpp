#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "iprior/corpus.hpp"
#include "iprior/matrix.hpp"
#include "iprior/priors.hpp"
#include "iprior/rng.hpp"

namespace iprior {

struct ModelConfig {
  int num_topics = 20;
  double alpha = 1.0;
  int iterations = 200;
  std::optional<int> burn_in;  // defaults to iterations / 2
  std::uint64_t seed = 1;
  bool average_estimates = false;

  int resolved_burn_in() const { return burn_in.value_or(iterations / 2); }
  void check() const;  // throws Error(kInvalidArgument)
};

/// Collapsed Gibbs state. Topic-word counts are stored word-major (V x K) so
/// the per-token conditional reads one contiguous row.
struct ModelState {
  std::vector<std::vector<std::uint16_t>> z;
  Matrix<std::int32_t> n_dk;  // D x K
  Matrix<std::int32_t> n_wk;  // V x K
  std::vector<std::int64_t> n_k;
  std::vector<Rng> doc_rng;   // one stream per document

  std::size_t num_topics() const noexcept { return n_k.size(); }
  std::int32_t topic_word(std::size_t k, WordId w) const { return n_wk(w, k); }
};

struct FittedModel {
  ModelConfig config;
  std::vector<std::string> vocabulary;
  std::vector<TopicKind> kinds;
  Matrix<double> beta_hat;   // K x V
  Matrix<double> theta_hat;  // D x K
  std::vector<double> loglik_trace;

  std::size_t num_topics() const noexcept { return beta_hat.rows(); }
  std::size_t vocab_size() const noexcept { return beta_hat.cols(); }
};

/// Tokens are placed one at a time in document order, each drawn from the
/// collapsed conditional given the tokens already placed.
ModelState init(const Corpus& corpus, const PriorMatrix& prior, const ModelConfig& config);

/// Resamples every token once in document order.
void sweep(ModelState& state, const Corpus& corpus, const PriorMatrix& prior, double alpha);

/// Posterior-mean point estimates given the current assignments.
FittedModel estimate(const ModelState& state, const Corpus& corpus, const PriorMatrix& prior,
                     double alpha);

/// Collapsed joint log p(w, z | alpha, eta).
double log_likelihood(const ModelState& state, const Corpus& corpus, const PriorMatrix& prior,
                      double alpha);

FittedModel fit(const Corpus& corpus, const PriorMatrix& prior, const ModelConfig& config);

/// Recounts z from scratch and compares with the stored tables.
bool counts_consistent(const ModelState& state, const Corpus& corpus);

/// n most probable words, ties by ascending id.
std::vector<WordId> top_words(std::span<const double> distribution, std::size_t n);
std::vector<WordId> top_words(const FittedModel& model, std::size_t topic, std::size_t n);

struct GridPoint {
  double alpha;
  double eta;
};

std::vector<GridPoint> default_hyperparameter_grid();

struct HyperparameterSearchResult {
  FittedModel best;
  std::size_t best_index = 0;
  std::vector<GridPoint> grid;
  std::vector<double> final_loglik;  // one per grid point
};

/// One symmetric-prior fit per grid point; keeps the fit with the highest
/// final training log-likelihood (first one wins ties).
HyperparameterSearchResult hyperparameter_search(const Corpus& corpus,
                                                 const std::vector<GridPoint>& grid,
                                                 const ModelConfig& config);

/// Perplexity of held-out documents under fixed topics; document mixtures
/// are folded in with Gibbs sweeps over the held-out tokens only.
double heldout_perplexity(const FittedModel& model, const std::vector<Document>& documents,
                          double alpha, int iterations, std::uint64_t seed);

}  // namespace iprior
