#include "iprior/sampler.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "iprior/error.hpp"

namespace iprior {

namespace {

// Reentrant log-gamma; std::lgamma writes the global signgam.
double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

// eta transposed to V x K plus per-topic sums, so the sweep reads rows.
struct PriorView {
  Matrix<double> eta_wk;
  std::vector<double> eta_sum;

  explicit PriorView(const PriorMatrix& prior)
      : eta_wk(prior.vocab_size(), prior.num_topics()), eta_sum(prior.num_topics(), 0.0) {
    for (std::size_t k = 0; k < prior.num_topics(); ++k) {
      for (std::size_t w = 0; w < prior.vocab_size(); ++w) eta_wk(w, k) = prior.weights(k, w);
      eta_sum[k] = prior.row_sum(k);
    }
  }
};

void check_dimensions(const Corpus& corpus, const PriorMatrix& prior) {
  if (prior.vocab_size() != corpus.vocab_size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "prior has " + std::to_string(prior.vocab_size()) + " columns but the corpus has " +
                    std::to_string(corpus.vocab_size()) + " words");
  }
  if (prior.num_topics() == 0) throw Error(ErrorCode::kDimensionMismatch, "prior has no topics");
}

void sweep_with(ModelState& state, const Corpus& corpus, const PriorView& view, double alpha,
                std::vector<double>& cumulative) {
  const std::size_t K = state.num_topics();
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const auto& doc = corpus.documents[d];
    auto& zd = state.z[d];
    auto ndk = state.n_dk.row(d);
    Rng& rng = state.doc_rng[d];
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const WordId w = doc[i];
      const std::size_t old = zd[i];
      auto nwk = state.n_wk.row(w);
      const auto eta = view.eta_wk.row(w);
      --ndk[old];
      --nwk[old];
      --state.n_k[old];

      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        total += (ndk[k] + alpha) * (nwk[k] + eta[k]) /
                 (static_cast<double>(state.n_k[k]) + view.eta_sum[k]);
        cumulative[k] = total;
      }
      const double u = rng.uniform() * total;
      std::size_t k_new = 0;
      while (k_new + 1 < K && cumulative[k_new] <= u) ++k_new;

      zd[i] = static_cast<std::uint16_t>(k_new);
      ++ndk[k_new];
      ++nwk[k_new];
      ++state.n_k[k_new];
    }
  }
  assert(counts_consistent(state, corpus));
}

double log_likelihood_with(const ModelState& state, const Corpus& corpus, const PriorMatrix& prior,
                           const PriorView& view, double alpha) {
  const std::size_t K = state.num_topics();
  const double k_alpha = static_cast<double>(K) * alpha;
  const double lg_alpha = log_gamma(alpha);
  double ll = 0.0;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const auto len = static_cast<double>(corpus.documents[d].size());
    ll += log_gamma(k_alpha) - log_gamma(len + k_alpha);
    for (std::size_t k = 0; k < K; ++k) ll += log_gamma(state.n_dk(d, k) + alpha) - lg_alpha;
  }
  for (std::size_t k = 0; k < K; ++k) {
    ll += log_gamma(view.eta_sum[k]) -
          log_gamma(static_cast<double>(state.n_k[k]) + view.eta_sum[k]);
    for (std::size_t w = 0; w < prior.vocab_size(); ++w) {
      const std::int32_t n = state.n_wk(w, k);
      if (n > 0) {
        const double eta = view.eta_wk(w, k);
        ll += log_gamma(n + eta) - log_gamma(eta);
      }
    }
  }
  return ll;
}

void accumulate_estimates(const ModelState& state, const Corpus& corpus, const PriorView& view,
                          double alpha, Matrix<double>& beta, Matrix<double>& theta) {
  const std::size_t K = state.num_topics();
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = static_cast<double>(state.n_k[k]) + view.eta_sum[k];
    for (std::size_t w = 0; w < beta.cols(); ++w) {
      beta(k, w) += (state.n_wk(w, k) + view.eta_wk(w, k)) / denom;
    }
  }
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const double denom = static_cast<double>(corpus.documents[d].size()) + static_cast<double>(K) * alpha;
    for (std::size_t k = 0; k < K; ++k) theta(d, k) += (state.n_dk(d, k) + alpha) / denom;
  }
}

}  // namespace

void ModelConfig::check() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (num_topics < 1 || num_topics > std::numeric_limits<std::uint16_t>::max()) {
    fail("number of topics must be in [1, 65535]");
  }
  if (!(alpha > 0.0)) fail("alpha must be positive");
  if (iterations < 1) fail("iterations must be at least 1");
  const int b = resolved_burn_in();
  if (b < 0 || b >= iterations) fail("burn-in must satisfy 0 <= burn_in < iterations");
}

ModelState init(const Corpus& corpus, const PriorMatrix& prior, const ModelConfig& config) {
  config.check();
  check_dimensions(corpus, prior);
  if (prior.num_topics() != static_cast<std::size_t>(config.num_topics)) {
    throw Error(ErrorCode::kDimensionMismatch, "prior rows do not match the configured K");
  }
  const std::size_t K = prior.num_topics();
  const std::size_t D = corpus.num_docs();
  ModelState state;
  state.z.resize(D);
  state.n_dk = Matrix<std::int32_t>(D, K);
  state.n_wk = Matrix<std::int32_t>(corpus.vocab_size(), K);
  state.n_k.assign(K, 0);
  state.doc_rng.reserve(D);
  const PriorView view(prior);
  std::vector<double> cumulative(K);
  for (std::size_t d = 0; d < D; ++d) {
    state.doc_rng.push_back(Rng::stream(config.seed, d));
    const auto& doc = corpus.documents[d];
    auto& zd = state.z[d];
    zd.resize(doc.size());
    auto ndk = state.n_dk.row(d);
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const auto nwk = state.n_wk.row(doc[i]);
      const auto eta = view.eta_wk.row(doc[i]);
      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        total += (ndk[k] + config.alpha) * (nwk[k] + eta[k]) /
                 (static_cast<double>(state.n_k[k]) + view.eta_sum[k]);
        cumulative[k] = total;
      }
      const double u = state.doc_rng[d].uniform() * total;
      std::uint16_t k = 0;
      while (k + 1u < K && cumulative[k] <= u) ++k;
      zd[i] = k;
      ++state.n_dk(d, k);
      ++state.n_wk(doc[i], k);
      ++state.n_k[k];
    }
  }
  return state;
}

void sweep(ModelState& state, const Corpus& corpus, const PriorMatrix& prior, double alpha) {
  const PriorView view(prior);
  std::vector<double> cumulative(state.num_topics());
  sweep_with(state, corpus, view, alpha, cumulative);
}

double log_likelihood(const ModelState& state, const Corpus& corpus, const PriorMatrix& prior,
                      double alpha) {
  return log_likelihood_with(state, corpus, prior, PriorView(prior), alpha);
}

FittedModel estimate(const ModelState& state, const Corpus& corpus, const PriorMatrix& prior,
                     double alpha) {
  const PriorView view(prior);
  FittedModel model;
  model.vocabulary = corpus.vocabulary.words();
  model.kinds = prior.kinds;
  model.config.num_topics = static_cast<int>(state.num_topics());
  model.config.alpha = alpha;
  model.beta_hat = Matrix<double>(state.num_topics(), corpus.vocab_size());
  model.theta_hat = Matrix<double>(corpus.num_docs(), state.num_topics());
  accumulate_estimates(state, corpus, view, alpha, model.beta_hat, model.theta_hat);
  return model;
}

FittedModel fit(const Corpus& corpus, const PriorMatrix& prior, const ModelConfig& config) {
  ModelState state = init(corpus, prior, config);
  const PriorView view(prior);
  const int burn_in = config.resolved_burn_in();
  std::vector<double> cumulative(state.num_topics());

  Matrix<double> beta_sum(state.num_topics(), corpus.vocab_size());
  Matrix<double> theta_sum(corpus.num_docs(), state.num_topics());
  int samples = 0;
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(config.iterations));
  for (int it = 1; it <= config.iterations; ++it) {
    sweep_with(state, corpus, view, config.alpha, cumulative);
    trace.push_back(log_likelihood_with(state, corpus, prior, view, config.alpha));
    if (config.average_estimates && it > burn_in) {
      accumulate_estimates(state, corpus, view, config.alpha, beta_sum, theta_sum);
      ++samples;
    }
  }

  FittedModel model;
  if (config.average_estimates && samples > 0) {
    model.vocabulary = corpus.vocabulary.words();
    model.kinds = prior.kinds;
    const double inv = 1.0 / samples;
    for (auto& x : beta_sum.data()) x *= inv;
    for (auto& x : theta_sum.data()) x *= inv;
    model.beta_hat = std::move(beta_sum);
    model.theta_hat = std::move(theta_sum);
  } else {
    model = estimate(state, corpus, prior, config.alpha);
  }
  model.config = config;
  model.config.burn_in = burn_in;
  model.loglik_trace = std::move(trace);
  return model;
}

bool counts_consistent(const ModelState& state, const Corpus& corpus) {
  const std::size_t K = state.num_topics();
  Matrix<std::int32_t> n_dk(corpus.num_docs(), K);
  Matrix<std::int32_t> n_wk(corpus.vocab_size(), K);
  std::vector<std::int64_t> n_k(K, 0);
  if (state.z.size() != corpus.num_docs()) return false;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const auto& doc = corpus.documents[d];
    if (state.z[d].size() != doc.size()) return false;
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const auto k = state.z[d][i];
      if (k >= K) return false;
      ++n_dk(d, k);
      ++n_wk(doc[i], k);
      ++n_k[k];
    }
  }
  return n_dk == state.n_dk && n_wk == state.n_wk && n_k == state.n_k;
}

std::vector<WordId> top_words(std::span<const double> distribution, std::size_t n) {
  std::vector<WordId> ids(distribution.size());
  std::iota(ids.begin(), ids.end(), WordId{0});
  const std::size_t m = std::min(n, ids.size());
  auto by_mass = [&](WordId a, WordId b) {
    if (distribution[a] != distribution[b]) return distribution[a] > distribution[b];
    return a < b;
  };
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(m), ids.end(), by_mass);
  ids.resize(m);
  return ids;
}

std::vector<WordId> top_words(const FittedModel& model, std::size_t topic, std::size_t n) {
  if (topic >= model.num_topics()) throw Error(ErrorCode::kInvalidArgument, "topic index out of range");
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "top-word count must be positive");
  return top_words(model.beta_hat.row(topic), n);
}

std::vector<GridPoint> default_hyperparameter_grid() {
  std::vector<GridPoint> grid;
  for (double a : {0.01, 0.1, 1.0, 10.0}) {
    for (double e : {0.01, 0.1, 1.0, 10.0}) grid.push_back({a, e});
  }
  return grid;
}

HyperparameterSearchResult hyperparameter_search(const Corpus& corpus,
                                                 const std::vector<GridPoint>& grid,
                                                 const ModelConfig& config) {
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "hyperparameter grid is empty");
  HyperparameterSearchResult result;
  result.grid = grid;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ModelConfig c = config;
    c.alpha = grid[i].alpha;
    PriorMatrix prior{Matrix<double>(static_cast<std::size_t>(c.num_topics), corpus.vocab_size(), grid[i].eta),
                      std::vector<TopicKind>(static_cast<std::size_t>(c.num_topics), TopicKind::kSymmetric)};
    FittedModel model = fit(corpus, prior, c);
    const double ll = model.loglik_trace.back();
    result.final_loglik.push_back(ll);
    if (i == 0 || ll > best) {
      best = ll;
      result.best_index = i;
      result.best = std::move(model);
    }
  }
  return result;
}

double heldout_perplexity(const FittedModel& model, const std::vector<Document>& documents,
                          double alpha, int iterations, std::uint64_t seed) {
  const std::size_t K = model.num_topics();
  const std::size_t V = model.vocab_size();
  double log_sum = 0.0;
  std::size_t n_tokens = 0;
  std::vector<double> p(K);
  std::vector<std::int32_t> counts(K);
  for (std::size_t d = 0; d < documents.size(); ++d) {
    const auto& doc = documents[d];
    if (doc.empty()) continue;
    for (WordId w : doc) {
      if (w >= V) throw Error(ErrorCode::kDimensionMismatch, "held-out word id outside the model vocabulary");
    }
    Rng rng = Rng::stream(seed, d);
    std::fill(counts.begin(), counts.end(), 0);
    std::vector<std::uint16_t> z(doc.size());
    for (auto& zi : z) {
      zi = static_cast<std::uint16_t>(rng.below(K));
      ++counts[zi];
    }
    for (int it = 0; it < iterations; ++it) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        --counts[z[i]];
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          total += (counts[k] + alpha) * model.beta_hat(k, doc[i]);
          p[k] = total;
        }
        const double u = rng.uniform() * total;
        std::size_t k_new = 0;
        while (k_new + 1 < K && p[k_new] <= u) ++k_new;
        z[i] = static_cast<std::uint16_t>(k_new);
        ++counts[k_new];
      }
    }
    const double denom = static_cast<double>(doc.size()) + static_cast<double>(K) * alpha;
    for (WordId w : doc) {
      double pw = 0.0;
      for (std::size_t k = 0; k < K; ++k) pw += (counts[k] + alpha) / denom * model.beta_hat(k, w);
      log_sum += std::log(pw);
    }
    n_tokens += doc.size();
  }
  if (n_tokens == 0) throw Error(ErrorCode::kInvalidArgument, "held-out documents contain no tokens");
  return std::exp(-log_sum / static_cast<double>(n_tokens));
}

}  // namespace iprior
