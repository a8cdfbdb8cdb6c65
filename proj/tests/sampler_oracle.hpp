#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "iprior/corpus.hpp"
#include "iprior/matrix.hpp"
#include "iprior/priors.hpp"
#include "iprior/sampler.hpp"

namespace iprior::testing {

// Joint p(w, z) built token by token as a product of Polya-urn predictive
// probabilities; shares no code with the sampler's log-gamma form.
inline double urn_joint(const Corpus& corpus, const std::vector<std::vector<std::size_t>>& z,
                        const PriorMatrix& prior, double alpha) {
  const std::size_t K = prior.num_topics();
  const std::size_t V = prior.vocab_size();
  std::vector<double> n_k(K, 0.0);
  std::vector<std::vector<double>> n_kw(K, std::vector<double>(V, 0.0));
  double p = 1.0;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    std::vector<double> n_dk(K, 0.0);
    double n_d = 0.0;
    for (std::size_t i = 0; i < corpus.documents[d].size(); ++i) {
      const auto w = corpus.documents[d][i];
      const auto k = z[d][i];
      double eta_sum = 0.0;
      for (std::size_t v = 0; v < V; ++v) eta_sum += prior.weights(k, v);
      p *= (n_dk[k] + alpha) / (n_d + K * alpha);
      p *= (n_kw[k][w] + prior.weights(k, w)) / (n_k[k] + eta_sum);
      n_dk[k] += 1;
      n_d += 1;
      n_kw[k][w] += 1;
      n_k[k] += 1;
    }
  }
  return p;
}

// Every assignment of K topics to the corpus tokens, in lexicographic order.
inline std::vector<std::vector<std::vector<std::size_t>>> all_assignments(const Corpus& corpus,
                                                                          std::size_t K) {
  std::size_t n = corpus.num_tokens();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= K;
  std::vector<std::vector<std::vector<std::size_t>>> out;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::vector<std::size_t>> z;
    std::size_t c = code;
    for (const auto& doc : corpus.documents) {
      std::vector<std::size_t> zd(doc.size());
      for (auto& k : zd) {
        k = c % K;
        c /= K;
      }
      z.push_back(std::move(zd));
    }
    out.push_back(std::move(z));
  }
  return out;
}

// Overwrites the assignments and recounts every table.
inline void set_assignments(ModelState& state, const Corpus& corpus,
                            const std::vector<std::vector<std::size_t>>& z) {
  state.n_dk.fill(0);
  state.n_wk.fill(0);
  std::fill(state.n_k.begin(), state.n_k.end(), 0);
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    for (std::size_t i = 0; i < corpus.documents[d].size(); ++i) {
      const auto k = z[d][i];
      state.z[d][i] = static_cast<std::uint16_t>(k);
      ++state.n_dk(d, k);
      ++state.n_wk(corpus.documents[d][i], k);
      ++state.n_k[k];
    }
  }
}

inline double cosine(std::span<const double> a, std::span<const double> b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

// Greedy alignment: repeatedly take the best remaining (fitted, planted)
// pair; returns the cosine of each planted topic's partner.
inline std::vector<double> greedy_alignment(const Matrix<double>& fitted, const Matrix<double>& planted) {
  std::vector<bool> used_f(fitted.rows(), false), used_p(planted.rows(), false);
  std::vector<double> out(planted.rows(), 0.0);
  for (std::size_t round = 0; round < std::min(fitted.rows(), planted.rows()); ++round) {
    double best = -1;
    std::size_t bf = 0, bp = 0;
    for (std::size_t f = 0; f < fitted.rows(); ++f) {
      if (used_f[f]) continue;
      for (std::size_t p = 0; p < planted.rows(); ++p) {
        if (used_p[p]) continue;
        const double c = cosine(fitted.row(f), planted.row(p));
        if (c > best) {
          best = c;
          bf = f;
          bp = p;
        }
      }
    }
    used_f[bf] = used_p[bp] = true;
    out[bp] = best;
  }
  return out;
}

}  // namespace iprior::testing
