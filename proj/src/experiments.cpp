#include "iprior/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <thread>

#include "iprior/error.hpp"
#include "iprior/io.hpp"
#include "iprior/log.hpp"
#include "iprior/priors.hpp"

namespace iprior {

namespace detail {
extern const std::string_view kDefaultStoplistText;
}

using nlohmann::json;

const WordSet& default_stoplist() {
  static const WordSet list = parse_word_list(detail::kDefaultStoplistText);
  return list;
}

namespace {

struct VariantInfo {
  Variant variant;
  std::string_view name;
};

constexpr VariantInfo kVariants[] = {
    {Variant::kNoDeletion, "NoDeletion"},
    {Variant::kStopwordDeletion, "StopwordDeletion"},
    {Variant::kTfIdfDeletion, "TfIdfDeletion"},
    {Variant::kKeywordTopicsBaseline, "KeywordTopicsBaseline"},
    {Variant::kHyperparamOpt, "HyperparamOpt"},
    {Variant::kDeletionPlusHyperparamOpt, "DeletionPlusHyperparamOpt"},
    {Variant::kWordFreqPrior, "WordFreqPrior"},
    {Variant::kTfIdfPrior, "TfIdfPrior"},
    {Variant::kKeywordSeedingPrior, "KeywordSeedingPrior"},
};

}  // namespace

std::string_view to_string(Variant v) {
  for (const auto& info : kVariants) {
    if (info.variant == v) return info.name;
  }
  return "Unknown";
}

Variant parse_variant(std::string_view name) {
  for (const auto& info : kVariants) {
    if (info.name == name) return info.variant;
  }
  throw Error(ErrorCode::kParse, "unknown model variant '" + std::string(name) + "'");
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> all = [] {
    std::vector<Variant> v;
    for (const auto& info : kVariants) v.push_back(info.variant);
    return v;
  }();
  return all;
}

bool alters_vocabulary(Variant v) {
  return v == Variant::kStopwordDeletion || v == Variant::kTfIdfDeletion ||
         v == Variant::kDeletionPlusHyperparamOpt;
}

bool forces_zero_stopwords(Variant v) {
  return v == Variant::kStopwordDeletion || v == Variant::kDeletionPlusHyperparamOpt;
}

bool is_prior_variant(Variant v) {
  return v == Variant::kWordFreqPrior || v == Variant::kTfIdfPrior || v == Variant::kKeywordSeedingPrior;
}

Grid Grid::full_sweep() {
  Grid g;
  g.topics.clear();
  for (int k = 5; k <= 50; k += 5) g.topics.push_back(k);
  g.iterations = {100, 200, 500, 1000};
  g.c1 = {100, 10, 1, 0.1, 0.01};
  g.c2 = {100, 10, 1, 0.1, 0.01};
  g.c = {10, 50, 100, 1000};
  g.tfidf_topics = {1, 5, 10, 19};
  g.keyword_topics = {1, 5, 10, 18, 19};
  return g;
}

// ---------------------------------------------------------------------------
// Plan files

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

template <typename T>
void read_list(const json& j, const char* key, std::vector<T>& out) {
  if (!j.contains(key)) return;
  out = j.at(key).get<std::vector<T>>();
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, std::string("grid dimension '") + key + "' is empty");
}

}  // namespace

ExperimentPlan plan_from_json(const json& j, const std::filesystem::path& base_dir) {
  try {
    ExperimentPlan plan;
    plan.corpus = resolve(base_dir, j.at("corpus").get<std::string>());
    if (j.contains("variants")) {
      for (const auto& v : j.at("variants")) plan.variants.push_back(parse_variant(v.get<std::string>()));
    } else {
      plan.variants = all_variants();
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      read_list(g, "topics", plan.grid.topics);
      read_list(g, "iterations", plan.grid.iterations);
      read_list(g, "c1", plan.grid.c1);
      read_list(g, "c2", plan.grid.c2);
      read_list(g, "c", plan.grid.c);
      read_list(g, "tfidf_topics", plan.grid.tfidf_topics);
      read_list(g, "keyword_topics", plan.grid.keyword_topics);
    }
    read_list(j, "seeds", plan.seeds);
    if (j.contains("stoplist")) plan.stoplist = resolve(base_dir, j.at("stoplist").get<std::string>());
    if (j.contains("whitelist")) plan.whitelist = resolve(base_dir, j.at("whitelist").get<std::string>());
    if (j.contains("keywords")) plan.keywords = resolve(base_dir, j.at("keywords").get<std::string>());
    plan.alpha = j.value("alpha", plan.alpha);
    plan.eta = j.value("eta", plan.eta);
    if (j.contains("burn_in_fraction")) plan.burn_in_fraction = j.at("burn_in_fraction").get<double>();
    plan.stopword_topics = j.value("stopword_topics", plan.stopword_topics);
    plan.tfidf_cut = j.value("tfidf_cut", plan.tfidf_cut);
    if (j.contains("hyper_grid")) {
      plan.hyper_grid.clear();
      const auto& h = j.at("hyper_grid");
      for (double a : h.at("alpha").get<std::vector<double>>()) {
        for (double e : h.at("eta").get<std::vector<double>>()) plan.hyper_grid.push_back({a, e});
      }
    }
    plan.metrics.top_n = j.value("top", plan.metrics.top_n);
    plan.metrics.n_lift = j.value("n_lift", plan.metrics.n_lift);
    plan.metrics.pmi_smoothing = j.value("pmi_smoothing", plan.metrics.pmi_smoothing);
    plan.jobs = j.value("jobs", plan.jobs);
    if (plan.variants.empty()) throw Error(ErrorCode::kInvalidArgument, "plan lists no variants");
    return plan;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("plan: ") + e.what());
  }
}

json to_json(const ExperimentPlan& plan) {
  json j;
  j["corpus"] = plan.corpus.string();
  json variants = json::array();
  for (auto v : plan.variants) variants.push_back(std::string(to_string(v)));
  j["variants"] = std::move(variants);
  j["grid"] = {{"topics", plan.grid.topics},       {"iterations", plan.grid.iterations},
               {"c1", plan.grid.c1},               {"c2", plan.grid.c2},
               {"c", plan.grid.c},                 {"tfidf_topics", plan.grid.tfidf_topics},
               {"keyword_topics", plan.grid.keyword_topics}};
  j["seeds"] = plan.seeds;
  if (plan.stoplist) j["stoplist"] = plan.stoplist->string();
  if (plan.whitelist) j["whitelist"] = plan.whitelist->string();
  if (plan.keywords) j["keywords"] = plan.keywords->string();
  j["alpha"] = plan.alpha;
  j["eta"] = plan.eta;
  if (plan.burn_in_fraction) j["burn_in_fraction"] = *plan.burn_in_fraction;
  j["stopword_topics"] = plan.stopword_topics;
  j["tfidf_cut"] = plan.tfidf_cut;
  json grid = json::array();
  for (const auto& p : plan.hyper_grid) grid.push_back({{"alpha", p.alpha}, {"eta", p.eta}});
  j["hyper_grid_points"] = std::move(grid);
  j["top"] = plan.metrics.top_n;
  j["n_lift"] = plan.metrics.n_lift;
  j["pmi_smoothing"] = plan.metrics.pmi_smoothing;
  return j;
}

// ---------------------------------------------------------------------------
// Context

ExperimentContext make_context(Corpus corpus, WordSet stoplist, std::optional<WordSet> whitelist,
                               std::optional<WordSet> keywords) {
  ExperimentContext ctx;
  ctx.corpus_hash = hex64(fnv1a64(to_json(corpus).dump()));
  ctx.stats = compute_stats(corpus);
  ctx.corpus = std::move(corpus);
  ctx.stoplist = std::move(stoplist);
  ctx.whitelist = std::move(whitelist);
  ctx.keywords = std::move(keywords);
  return ctx;
}

namespace {

WordSet load_list(const std::filesystem::path& path, std::string_view what) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingResource, std::string(what) + " '" + path.string() + "' does not exist");
  }
  return read_word_list(path);
}

}  // namespace

ExperimentContext load_context(const ExperimentPlan& plan) {
  if (!std::filesystem::exists(plan.corpus)) {
    throw Error(ErrorCode::kMissingResource, "corpus '" + plan.corpus.string() + "' does not exist");
  }
  WordSet stoplist = plan.stoplist ? load_list(*plan.stoplist, "stoplist") : default_stoplist();
  std::optional<WordSet> whitelist;
  if (plan.whitelist) whitelist = load_list(*plan.whitelist, "whitelist");
  std::optional<WordSet> keywords;
  if (plan.keywords) keywords = load_list(*plan.keywords, "keyword list");
  return make_context(load_corpus(plan.corpus), std::move(stoplist), std::move(whitelist), std::move(keywords));
}

// ---------------------------------------------------------------------------
// Grid enumeration

namespace {

bool uses_c1(Variant v) { return v == Variant::kTfIdfPrior || v == Variant::kKeywordSeedingPrior; }
bool uses_keywords(Variant v) {
  return v == Variant::kKeywordTopicsBaseline || v == Variant::kKeywordSeedingPrior;
}

}  // namespace

std::vector<RunSpec> enumerate_runs(const ExperimentPlan& plan) {
  const Grid& g = plan.grid;
  const RunConfig defaults;
  std::vector<RunSpec> specs;
  for (Variant v : plan.variants) {
    const std::vector<double> c1 = uses_c1(v) ? g.c1 : std::vector<double>{defaults.c1};
    const std::vector<double> c2 = uses_keywords(v) ? g.c2 : std::vector<double>{defaults.c2};
    const std::vector<double> c = uses_keywords(v) ? g.c : std::vector<double>{defaults.c};
    const bool seeding = v == Variant::kKeywordSeedingPrior;
    const std::vector<int> tf = seeding ? g.tfidf_topics : std::vector<int>{defaults.tfidf_topics};
    const std::vector<int> kw = seeding ? g.keyword_topics : std::vector<int>{defaults.keyword_topics};
    for (int K : g.topics)
      for (int iters : g.iterations)
        for (double a : c1)
          for (double b : c2)
            for (double boost : c)
              for (int J : tf)
                for (int kwc : kw)
                  for (auto seed : plan.seeds) {
                    specs.push_back({v, RunConfig{K, iters, a, b, boost, J, kwc}, seed});
                  }
  }
  return specs;
}

std::string config_label(Variant v, const RunConfig& config) {
  std::ostringstream out;
  out << "K=" << config.num_topics << ";iters=" << config.iterations;
  if (uses_c1(v)) out << ";c1=" << format_double(config.c1);
  if (uses_keywords(v)) out << ";c2=" << format_double(config.c2) << ";c=" << format_double(config.c);
  if (v == Variant::kKeywordSeedingPrior) {
    out << ";tfidf_topics=" << config.tfidf_topics << ";keyword_topics=" << config.keyword_topics;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Runs

namespace {

const WordSet& keyword_list(const ExperimentContext& ctx, Variant v) {
  if (ctx.keywords) return *ctx.keywords;
  if (ctx.whitelist) return *ctx.whitelist;
  throw Error(ErrorCode::kMissingResource,
              std::string(to_string(v)) + " needs a keyword list (plan 'keywords' or 'whitelist')");
}

}  // namespace

RunRecord run_variant(const ExperimentContext& ctx, const ExperimentPlan& plan, Variant variant,
                      const RunConfig& config, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.variant = variant;
  rec.config = config;
  rec.seed = seed;
  rec.label = config_label(variant, config);

  std::shared_ptr<const Corpus> corpus;
  switch (variant) {
    case Variant::kStopwordDeletion:
    case Variant::kDeletionPlusHyperparamOpt:
      corpus = std::make_shared<const Corpus>(delete_stopwords(ctx.corpus, ctx.stoplist));
      break;
    case Variant::kTfIdfDeletion:
      corpus = std::make_shared<const Corpus>(delete_low_tfidf(ctx.corpus, plan.tfidf_cut));
      break;
    default:
      corpus = std::shared_ptr<const Corpus>(std::shared_ptr<const Corpus>{}, &ctx.corpus);
      break;
  }
  const CorpusStats local_stats = alters_vocabulary(variant) ? compute_stats(*corpus) : CorpusStats{};
  const CorpusStats& stats = alters_vocabulary(variant) ? local_stats : ctx.stats;

  ModelConfig mc;
  mc.num_topics = config.num_topics;
  mc.alpha = plan.alpha;
  mc.iterations = config.iterations;
  if (plan.burn_in_fraction) {
    mc.burn_in = static_cast<int>(std::floor(*plan.burn_in_fraction * config.iterations));
  }
  mc.seed = seed;

  PriorConfig pc;
  const WordSet* keywords = nullptr;
  bool search = false;
  switch (variant) {
    case Variant::kNoDeletion:
    case Variant::kStopwordDeletion:
    case Variant::kTfIdfDeletion:
      pc = PriorConfig::symmetric_layout(config.num_topics, plan.eta);
      break;
    case Variant::kHyperparamOpt:
    case Variant::kDeletionPlusHyperparamOpt:
      search = true;
      break;
    case Variant::kKeywordTopicsBaseline:
      pc = PriorConfig::keyword_topics_layout(config.num_topics);
      keywords = &keyword_list(ctx, variant);
      break;
    case Variant::kWordFreqPrior:
      pc = PriorConfig::wordfreq_layout(config.num_topics, plan.stopword_topics);
      break;
    case Variant::kTfIdfPrior:
      pc = PriorConfig::tfidf_layout(config.num_topics, plan.stopword_topics);
      break;
    case Variant::kKeywordSeedingPrior:
      pc = PriorConfig::keyword_seeding_layout(config.num_topics, plan.stopword_topics, config.tfidf_topics,
                                               config.keyword_topics);
      keywords = &keyword_list(ctx, variant);
      break;
  }
  pc.c1 = config.c1;
  pc.c2 = config.c2;
  pc.c = config.c;

  FittedModel model;
  if (search) {
    model = hyperparameter_search(*corpus, plan.hyper_grid, mc).best;
  } else {
    const PriorMatrix prior = assemble(pc, stats, corpus->vocabulary, keywords ? *keywords : WordSet{});
    for (const auto& diag : validate(prior)) {
      log_warning(std::string(to_string(variant)) + " [" + rec.label + "]: " + diag.message);
    }
    model = fit(*corpus, prior, mc);
  }

  static const WordSet kEmpty;
  rec.report = report(model, *corpus, stats, ctx.stoplist, ctx.whitelist ? *ctx.whitelist : kEmpty, plan.metrics);
  rec.vocab_size = corpus->vocab_size();
  rec.model = std::make_shared<const FittedModel>(std::move(model));
  rec.corpus = std::move(corpus);
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<RunRecord> run_grid(const ExperimentContext& ctx, const ExperimentPlan& plan) {
  const auto specs = enumerate_runs(plan);
  std::vector<RunRecord> records(specs.size());
  std::size_t workers = plan.jobs ? plan.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(1, specs.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      const auto& s = specs[i];
      try {
        records[i] = run_variant(ctx, plan, s.variant, s.config, s.seed);
      } catch (const std::exception& e) {
        RunRecord failed;
        failed.variant = s.variant;
        failed.config = s.config;
        failed.seed = s.seed;
        failed.label = config_label(s.variant, s.config);
        failed.error = e.what();
        log_warning("run " + std::string(to_string(s.variant)) + " [" + failed.label +
                    "] seed " + std::to_string(s.seed) + " failed: " + e.what());
        records[i] = std::move(failed);
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  return records;
}

// ---------------------------------------------------------------------------
// Tables

namespace {

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string Table::to_csv() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_escape(cells[i]);
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

json Table::to_json() const {
  json rows_json = json::array();
  for (const auto& r : rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < header.size() && i < r.size(); ++i) obj[header[i]] = r[i];
    rows_json.push_back(std::move(obj));
  }
  return {{"columns", header}, {"rows", std::move(rows_json)}};
}

Table comparison_table(const std::vector<RunRecord>& records) {
  Table t;
  t.header = {"variant",       "config",       "seed",     "vocab_size",          "coherence_10",
              "coherence_30",  "pmi",          "log_lift", "stopword_rate",       "expert_rate",
              "codoc",         "stopword_rate_domain",     "expert_rate_domain",  "codoc_domain",
              "comparable"};
  for (const auto& r : records) {
    if (r.error) continue;
    const bool comparable = !alters_vocabulary(r.variant);
    const auto& m = r.report.mean_all;
    auto metric = [&](double x) { return comparable ? format_double(x) : std::string(kNotComparable); };
    std::vector<std::string> row = {std::string(to_string(r.variant)),
                                    r.label,
                                    std::to_string(r.seed),
                                    std::to_string(r.vocab_size),
                                    metric(m.coherence_10),
                                    metric(m.coherence_30),
                                    metric(m.pmi),
                                    format_double(m.log_lift),
                                    format_double(m.stopword_rate),
                                    format_double(m.expert_rate),
                                    format_double(m.codoc)};
    if (is_prior_variant(r.variant) && r.report.mean_domain) {
      row.push_back(format_double(r.report.mean_domain->stopword_rate));
      row.push_back(format_double(r.report.mean_domain->expert_rate));
      row.push_back(format_double(r.report.mean_domain->codoc));
    } else {
      row.insert(row.end(), {"", "", ""});
    }
    row.push_back(comparable ? "true" : "false");
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

constexpr const char* kMetrics[] = {"coherence_10", "coherence_30", "pmi", "log_lift"};
constexpr const char* kAxes[] = {"stopword_rate", "expert_rate", "codoc"};

double metric_value(const ScoreValues& v, std::string_view metric) {
  if (metric == "coherence_10") return v.coherence_10;
  if (metric == "coherence_30") return v.coherence_30;
  if (metric == "pmi") return v.pmi;
  return v.log_lift;
}

double axis_value(const ScoreValues& v, std::string_view axis) {
  if (axis == "stopword_rate") return v.stopword_rate;
  if (axis == "expert_rate") return v.expert_rate;
  return v.codoc;
}

bool metric_applies(Variant v, std::string_view metric) {
  return metric == "log_lift" || !alters_vocabulary(v);
}

}  // namespace

ScatterData correlation_data(const std::vector<RunRecord>& records) {
  ScatterData out;
  for (const auto* metric : kMetrics) {
    for (const auto& r : records) {
      if (r.error || !metric_applies(r.variant, metric)) continue;
      const auto& m = r.report.mean_all;
      out.rows.push_back({r.variant, r.label, r.seed, metric, metric_value(m, metric), m.stopword_rate,
                          m.expert_rate, m.codoc});
    }
  }
  for (const auto* metric : kMetrics) {
    for (const auto* axis : kAxes) {
      std::vector<double> xs, ys;
      for (const auto& r : records) {
        if (r.error || !metric_applies(r.variant, metric)) continue;
        if (std::string_view(axis) == "stopword_rate" && forces_zero_stopwords(r.variant)) continue;
        const double x = metric_value(r.report.mean_all, metric);
        if (!std::isfinite(x)) continue;
        xs.push_back(x);
        ys.push_back(axis_value(r.report.mean_all, axis));
      }
      out.correlations.push_back({metric, axis, xs.size(), spearman(xs, ys)});
    }
  }
  return out;
}

std::optional<double> ScatterData::rho(std::string_view metric, std::string_view axis) const {
  for (const auto& c : correlations) {
    if (c.metric == metric && c.axis == axis) return c.rho;
  }
  return std::nullopt;
}

Table ScatterData::scatter_table() const {
  Table t;
  t.header = {"variant", "config", "seed", "metric", "metric_value", "stopword_rate", "expert_rate", "codoc"};
  for (const auto& r : rows) {
    t.rows.push_back({std::string(to_string(r.variant)), r.label, std::to_string(r.seed), r.metric,
                      format_double(r.value), format_double(r.stopword_rate), format_double(r.expert_rate),
                      format_double(r.codoc)});
  }
  return t;
}

Table ScatterData::correlation_table() const {
  Table t;
  t.header = {"metric", "axis", "n", "spearman"};
  for (const auto& c : correlations) {
    t.rows.push_back({c.metric, c.axis, std::to_string(c.n), c.rho ? format_double(*c.rho) : "NA"});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

json run_config_to_json(const RunConfig& c) {
  return {{"num_topics", c.num_topics}, {"iterations", c.iterations}, {"c1", c.c1},
          {"c2", c.c2},                 {"c", c.c},                   {"tfidf_topics", c.tfidf_topics},
          {"keyword_topics", c.keyword_topics}};
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.num_topics = j.at("num_topics").get<int>();
  c.iterations = j.at("iterations").get<int>();
  c.c1 = j.at("c1").get<double>();
  c.c2 = j.at("c2").get<double>();
  c.c = j.at("c").get<double>();
  c.tfidf_topics = j.at("tfidf_topics").get<int>();
  c.keyword_topics = j.at("keyword_topics").get<int>();
  return c;
}

std::string run_stem(std::size_t index, const RunRecord& r) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05zu", index);
  return std::string(buf) + "_" + std::string(to_string(r.variant)) + "_s" + std::to_string(r.seed);
}

}  // namespace

json record_to_json(const RunRecord& r) {
  json j;
  j["version"] = kFormatVersion;
  j["variant"] = std::string(to_string(r.variant));
  j["label"] = r.label;
  j["config"] = run_config_to_json(r.config);
  j["seed"] = r.seed;
  j["vocab_size"] = r.vocab_size;
  if (r.error) {
    j["error"] = *r.error;
  } else {
    j["report"] = to_json(r.report);
  }
  return j;
}

RunRecord record_from_json(const json& j) {
  try {
    RunRecord r;
    r.variant = parse_variant(j.at("variant").get<std::string>());
    r.config = run_config_from_json(j.at("config"));
    r.label = j.at("label").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.vocab_size = j.at("vocab_size").get<std::size_t>();
    if (j.contains("error")) {
      r.error = j.at("error").get<std::string>();
    } else {
      r.report = report_from_json(j.at("report"));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("run record: ") + e.what());
  }
}

void write_outputs(const std::vector<RunRecord>& records, const ExperimentContext& ctx,
                   const ExperimentPlan& plan, const std::filesystem::path& out_dir) {
  const auto runs_dir = out_dir / "runs";
  std::filesystem::create_directories(runs_dir);
  json manifest;
  manifest["version"] = kFormatVersion;
  manifest["corpus"] = plan.corpus.string();
  manifest["corpus_hash"] = ctx.corpus_hash;
  manifest["plan"] = to_json(plan);
  json runs = json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto stem = run_stem(i, r);
    write_file(runs_dir / (stem + ".json"), record_to_json(r).dump(2) + "\n");
    if (!r.error) write_file(runs_dir / (stem + ".csv"), report_to_csv(r.report));
    json entry = {{"file", "runs/" + stem + ".json"},
                  {"variant", std::string(to_string(r.variant))},
                  {"label", r.label},
                  {"seed", r.seed},
                  {"seconds", r.seconds}};
    if (r.error) entry["error"] = *r.error;
    runs.push_back(std::move(entry));
  }
  manifest["runs"] = std::move(runs);
  write_file(out_dir / "comparison.csv", comparison_table(records).to_csv());
  const auto scatter = correlation_data(records);
  write_file(out_dir / "scatter.csv", scatter.scatter_table().to_csv());
  write_file(out_dir / "correlations.csv", scatter.correlation_table().to_csv());
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<RunRecord> read_run_records(const std::filesystem::path& runs_dir) {
  if (!std::filesystem::is_directory(runs_dir)) {
    throw Error(ErrorCode::kMissingResource, "runs directory '" + runs_dir.string() + "' does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(runs_dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunRecord> records;
  for (const auto& f : files) {
    try {
      records.push_back(record_from_json(json::parse(read_file(f))));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, f.string() + ": " + e.what());
    }
  }
  return records;
}

}  // namespace iprior
