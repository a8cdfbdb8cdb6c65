#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "iprior/corpus.hpp"
#include "iprior/metrics.hpp"
#include "iprior/sampler.hpp"

namespace iprior {

enum class Variant {
  kNoDeletion,
  kStopwordDeletion,
  kTfIdfDeletion,
  kKeywordTopicsBaseline,
  kHyperparamOpt,
  kDeletionPlusHyperparamOpt,
  kWordFreqPrior,
  kTfIdfPrior,
  kKeywordSeedingPrior,
};

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);
const std::vector<Variant>& all_variants();

bool alters_vocabulary(Variant v);
bool forces_zero_stopwords(Variant v);  // canonical stopwords deleted up front
bool is_prior_variant(Variant v);

/// One point of the parameter grid after resolution for a variant.
struct RunConfig {
  int num_topics = 20;
  int iterations = 200;
  double c1 = 1.0;
  double c2 = 1.0;
  double c = 100.0;
  int tfidf_topics = 9;
  int keyword_topics = 10;

  bool operator==(const RunConfig&) const = default;
};

struct Grid {
  std::vector<int> topics = {20};
  std::vector<int> iterations = {200};
  std::vector<double> c1 = {1.0};
  std::vector<double> c2 = {1.0};
  std::vector<double> c = {100.0};
  std::vector<int> tfidf_topics = {9};
  std::vector<int> keyword_topics = {10};

  /// The full sweep: K = 5..50 by 5, c1 and c2 in {100, 10, 1, 1/10, 1/100},
  /// TF-IDF topics {1, 5, 10, 19}, keyword topics {1, 5, 10, 18, 19},
  /// c in {10, 50, 100, 1000}, iterations {100, 200, 500, 1000}.
  static Grid full_sweep();
};

struct ExperimentPlan {
  std::filesystem::path corpus;
  std::vector<Variant> variants;
  Grid grid;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::optional<std::filesystem::path> stoplist;  // bundled list when unset
  std::optional<std::filesystem::path> whitelist;
  std::optional<std::filesystem::path> keywords;  // falls back to the whitelist
  double alpha = 1.0;
  double eta = 1.0;  // symmetric baselines
  std::optional<double> burn_in_fraction;  // of iterations; half when unset
  int stopword_topics = 1;
  double tfidf_cut = 0.05;
  std::vector<GridPoint> hyper_grid = default_hyperparameter_grid();
  MetricConfig metrics;
  std::size_t jobs = 0;  // 0: hardware concurrency
};

ExperimentPlan plan_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const ExperimentPlan& plan);

/// Corpus and word lists loaded once and shared read-only by every run.
struct ExperimentContext {
  Corpus corpus;
  CorpusStats stats;
  WordSet stoplist;
  std::optional<WordSet> whitelist;
  std::optional<WordSet> keywords;
  std::string corpus_hash;
};

ExperimentContext load_context(const ExperimentPlan& plan);
ExperimentContext make_context(Corpus corpus, WordSet stoplist, std::optional<WordSet> whitelist,
                               std::optional<WordSet> keywords);

struct RunSpec {
  Variant variant;
  RunConfig config;
  std::uint64_t seed;
};

/// Cartesian product of the grid dimensions that apply to each variant,
/// times the seeds, in plan order.
std::vector<RunSpec> enumerate_runs(const ExperimentPlan& plan);
std::string config_label(Variant v, const RunConfig& config);

struct RunRecord {
  Variant variant = Variant::kNoDeletion;
  RunConfig config;
  std::uint64_t seed = 0;
  std::string label;
  std::shared_ptr<const FittedModel> model;
  std::shared_ptr<const Corpus> corpus;  // the corpus the model was fit to
  ModelReport report;
  std::size_t vocab_size = 0;
  double seconds = 0.0;
  std::optional<std::string> error;
};

RunRecord run_variant(const ExperimentContext& ctx, const ExperimentPlan& plan, Variant variant,
                      const RunConfig& config, std::uint64_t seed);

/// Runs every enumerated spec on a bounded pool; failures are kept as
/// records with `error` set. Output order is plan order.
std::vector<RunRecord> run_grid(const ExperimentContext& ctx, const ExperimentPlan& plan);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

inline constexpr std::string_view kNotComparable = "n/c";

Table comparison_table(const std::vector<RunRecord>& records);

struct ScatterRow {
  Variant variant;
  std::string label;
  std::uint64_t seed;
  std::string metric;
  double value;
  double stopword_rate;
  double expert_rate;
  double codoc;
};

struct Correlation {
  std::string metric;
  std::string axis;
  std::size_t n = 0;
  std::optional<double> rho;
};

struct ScatterData {
  std::vector<ScatterRow> rows;
  std::vector<Correlation> correlations;

  std::optional<double> rho(std::string_view metric, std::string_view axis) const;
  Table scatter_table() const;
  Table correlation_table() const;
};

/// Coherence and PMI points are dropped for vocabulary-altering variants, and
/// stopword-rate points for variants whose stopword rate is forced to zero.
ScatterData correlation_data(const std::vector<RunRecord>& records);

/// Rank correlation with average ranks for ties; absent when either side is
/// constant or fewer than two points.
std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y);

nlohmann::json record_to_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::json& j);

/// Writes runs/*.json and runs/*.csv, comparison.csv, scatter.csv,
/// correlations.csv and manifest.json under out_dir.
void write_outputs(const std::vector<RunRecord>& records, const ExperimentContext& ctx,
                   const ExperimentPlan& plan, const std::filesystem::path& out_dir);

std::vector<RunRecord> read_run_records(const std::filesystem::path& runs_dir);

/// The bundled 127-word English stoplist.
const WordSet& default_stoplist();

}  // namespace iprior
