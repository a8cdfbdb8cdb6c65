#include "cli.hpp"

#include <filesystem>
#include <ostream>

#include "CLI11.hpp"

#include "iprior/error.hpp"
#include "iprior/experiments.hpp"
#include "iprior/io.hpp"
#include "iprior/log.hpp"

namespace iprior::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IngestArgs {
  std::string input;
  std::string format = "text";
  std::string stoplist;
  bool remove_stopwords = false;
  double tfidf_cut = 0.0;
  std::string out;
};

struct StatsArgs {
  std::string corpus;
  std::string out;
};

struct FitArgs {
  std::string corpus;
  std::string prior = "tfidf";
  int topics = 20;
  int stopword_topics = 1;
  int tfidf_topics = -1;
  int keyword_topics = 10;
  std::string keywords;
  double c1 = 1.0;
  double c2 = 1.0;
  double c = 100.0;
  double alpha = 1.0;
  double eta = 1.0;
  int iters = 200;
  int burn_in = -1;
  std::uint64_t seed = 1;
  std::string out;
};

struct ScoreArgs {
  std::string model;
  std::string corpus;
  std::string stoplist;
  std::string whitelist;
  int top = 30;
  std::string out;
};

struct ExperimentArgs {
  std::string plan;
  std::string out_dir = "results";
  std::size_t jobs = 0;
  std::string corpus;
  std::vector<std::string> variants;
  std::vector<int> topics;
  std::vector<int> iters;
  std::vector<double> c1;
  std::vector<double> c2;
  std::vector<double> c;
  std::vector<int> tfidf_topics;
  std::vector<int> keyword_topics;
  std::vector<std::uint64_t> seeds;
  std::string stoplist;
  std::string whitelist;
  std::string keywords;
  double alpha = 1.0;
  double eta = 1.0;
  double tfidf_cut = 0.05;
  int top = 30;
};

struct ReportArgs {
  std::string runs;
  std::string format = "csv";
  std::string out;
};

WordSet stoplist_or_default(const std::string& path) {
  return path.empty() ? default_stoplist() : read_word_list(path);
}

bool has_extension(const std::string& path, std::string_view ext) {
  return fs::path(path).extension() == ext;
}

int run_ingest(const IngestArgs& a, std::ostream& out) {
  const auto format = a.format == "jsonl" ? InputFormat::kJsonl : InputFormat::kText;
  auto raw = read_documents(a.input, format);
  const WordSet remove = a.remove_stopwords ? stoplist_or_default(a.stoplist) : WordSet{};
  Corpus corpus = build_corpus(raw.texts, remove, raw.ids);
  if (a.tfidf_cut > 0.0) corpus = delete_low_tfidf(corpus, a.tfidf_cut);
  write_file(a.out, to_json(corpus).dump() + "\n");
  out << "ingest: " << corpus.num_docs() << " documents, " << corpus.vocab_size() << " words, "
      << corpus.num_tokens() << " tokens -> " << a.out << '\n';
  return kExitOk;
}

int run_stats(const StatsArgs& a, std::ostream& out) {
  const Corpus corpus = load_corpus(a.corpus);
  const CorpusStats stats = compute_stats(corpus);
  write_file(a.out, to_json(stats, corpus.vocabulary).dump(2) + "\n");
  out << "stats: " << stats.n_docs << " documents, " << stats.vocab_size() << " words, " << stats.n_tokens
      << " tokens -> " << a.out << '\n';
  return kExitOk;
}

PriorConfig fit_layout(const FitArgs& a) {
  PriorConfig pc;
  if (a.prior == "none") {
    pc = PriorConfig::symmetric_layout(a.topics, a.eta);
  } else if (a.prior == "symmetric") {
    pc.num_topics = a.topics;
    pc.stopword_topics = a.stopword_topics;
    pc.symmetric_eta = a.eta;
  } else if (a.prior == "wordfreq") {
    pc = PriorConfig::wordfreq_layout(a.topics, a.stopword_topics);
  } else if (a.prior == "tfidf") {
    pc = PriorConfig::tfidf_layout(a.topics, a.stopword_topics);
    if (a.tfidf_topics >= 0) pc.tfidf_topics = a.tfidf_topics;
  } else {
    pc = PriorConfig::keyword_seeding_layout(a.topics, a.stopword_topics, a.tfidf_topics >= 0 ? a.tfidf_topics : 9,
                                             a.keyword_topics);
  }
  pc.c1 = a.c1;
  pc.c2 = a.c2;
  pc.c = a.c;
  pc.symmetric_eta = a.eta;
  return pc;
}

int run_fit(const FitArgs& a, std::ostream& out) {
  if (a.prior == "keyword" && a.keywords.empty()) {
    throw UsageError("--prior keyword requires --keywords");
  }
  const Corpus corpus = load_corpus(a.corpus);
  const CorpusStats stats = compute_stats(corpus);
  const WordSet keywords = a.keywords.empty() ? WordSet{} : read_word_list(a.keywords);
  const PriorMatrix prior = assemble(fit_layout(a), stats, corpus.vocabulary, keywords);
  for (const auto& d : validate(prior)) log_warning(d.message);

  ModelConfig mc;
  mc.num_topics = a.topics;
  mc.alpha = a.alpha;
  mc.iterations = a.iters;
  if (a.burn_in >= 0) mc.burn_in = a.burn_in;
  mc.seed = a.seed;
  const FittedModel model = fit(corpus, prior, mc);
  write_file(a.out, to_json(model).dump() + "\n");
  out << "fit: " << model.num_topics() << " topics over " << model.vocab_size() << " words, final log-likelihood "
      << format_double(model.loglik_trace.empty() ? 0.0 : model.loglik_trace.back()) << " -> " << a.out << '\n';
  return kExitOk;
}

int run_score(const ScoreArgs& a, std::ostream& out) {
  const FittedModel model = model_from_json(nlohmann::json::parse(read_file(a.model)));
  const Corpus corpus = load_corpus(a.corpus);
  const CorpusStats stats = compute_stats(corpus);
  const WordSet stoplist = stoplist_or_default(a.stoplist);
  const WordSet whitelist = a.whitelist.empty() ? WordSet{} : read_word_list(a.whitelist);
  MetricConfig mc;
  mc.top_n = static_cast<std::size_t>(a.top);
  const ModelReport rep = report(model, corpus, stats, stoplist, whitelist, mc);
  write_file(a.out, has_extension(a.out, ".csv") ? report_to_csv(rep) : to_json(rep).dump(2) + "\n");
  out << "score: " << rep.per_topic.size() << " topics, mean log lift " << format_double(rep.mean_all.log_lift)
      << ", stopword rate " << format_double(rep.mean_all.stopword_rate) << " -> " << a.out << '\n';
  return kExitOk;
}

template <typename T>
void override_list(const CLI::App& app, const char* flag, const std::vector<T>& value, std::vector<T>& target) {
  if (app.count(flag) > 0) target = value;
}

int run_experiment(const CLI::App& app, const ExperimentArgs& a, std::ostream& out) {
  ExperimentPlan plan;
  if (!a.plan.empty()) {
    const fs::path plan_path(a.plan);
    plan = plan_from_json(nlohmann::json::parse(read_file(plan_path)), plan_path.parent_path());
  } else {
    plan.variants = all_variants();
  }
  if (app.count("--corpus") > 0) plan.corpus = a.corpus;
  if (plan.corpus.empty()) throw UsageError("no corpus: pass --plan or --corpus");
  if (app.count("--variants") > 0) {
    plan.variants.clear();
    for (const auto& v : a.variants) plan.variants.push_back(parse_variant(v));
  }
  override_list(app, "--topics", a.topics, plan.grid.topics);
  override_list(app, "--iters", a.iters, plan.grid.iterations);
  override_list(app, "--c1", a.c1, plan.grid.c1);
  override_list(app, "--c2", a.c2, plan.grid.c2);
  override_list(app, "--c", a.c, plan.grid.c);
  override_list(app, "--tfidf-topics", a.tfidf_topics, plan.grid.tfidf_topics);
  override_list(app, "--keyword-topics", a.keyword_topics, plan.grid.keyword_topics);
  override_list(app, "--seeds", a.seeds, plan.seeds);
  if (app.count("--stoplist") > 0) plan.stoplist = a.stoplist;
  if (app.count("--whitelist") > 0) plan.whitelist = a.whitelist;
  if (app.count("--keywords") > 0) plan.keywords = a.keywords;
  if (app.count("--alpha") > 0) plan.alpha = a.alpha;
  if (app.count("--eta") > 0) plan.eta = a.eta;
  if (app.count("--tfidf-cut") > 0) plan.tfidf_cut = a.tfidf_cut;
  if (app.count("--top") > 0) plan.metrics.top_n = static_cast<std::size_t>(a.top);
  if (app.count("--jobs") > 0) plan.jobs = a.jobs;

  const ExperimentContext ctx = load_context(plan);
  const auto records = run_grid(ctx, plan);
  write_outputs(records, ctx, plan, a.out_dir);
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.error ? 1 : 0;
  out << "experiment: " << records.size() - failed << " of " << records.size() << " runs succeeded, corpus "
      << ctx.corpus_hash << " -> " << a.out_dir << '\n';
  return failed == 0 ? kExitOk : kExitRuntime;
}

int run_report(const ReportArgs& a, std::ostream& out) {
  fs::path dir(a.runs);
  if (fs::is_directory(dir / "runs")) dir /= "runs";
  const auto records = read_run_records(dir);
  const Table table = comparison_table(records);
  std::string body;
  if (a.format == "json") {
    nlohmann::json j = {{"comparison", table.to_json()},
                        {"correlations", correlation_data(records).correlation_table().to_json()}};
    body = j.dump(2) + "\n";
  } else {
    body = table.to_csv();
  }
  if (a.out.empty()) {
    out << body;
  } else {
    write_file(a.out, body);
    out << "report: " << table.rows.size() << " rows from " << records.size() << " runs -> " << a.out << '\n';
  }
  return kExitOk;
}

struct LogRedirect {
  explicit LogRedirect(std::ostream& err) {
    set_log_sink([&err](LogLevel level, const std::string& message) {
      err << (level == LogLevel::kError ? "error" : level == LogLevel::kWarning ? "warning" : "info") << ": "
          << message << '\n';
    });
  }
  ~LogRedirect() { set_log_sink({}); }
};

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  LogRedirect redirect(err);
  CLI::App app{"Informative-prior topic modeling toolkit", "iprior"};
  app.require_subcommand(1);
  app.allow_extras(false);

  const auto positive = CLI::PositiveNumber;

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Tokenize raw documents into a serialized corpus");
  ingest_cmd->add_option("--input", ingest.input, "Raw documents")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--format", ingest.format, "Input format")->check(CLI::IsMember({"text", "jsonl"}));
  ingest_cmd->add_option("--stoplist", ingest.stoplist, "Stoplist file (bundled list if omitted)")
      ->check(CLI::ExistingFile);
  ingest_cmd->add_flag("--remove-stopwords", ingest.remove_stopwords, "Drop stoplist words");
  ingest_cmd->add_option("--tfidf-cut", ingest.tfidf_cut, "Drop words below this TF-IDF quantile")
      ->check(CLI::Range(0.0, 1.0));
  ingest_cmd->add_option("--out", ingest.out, "Corpus JSON output")->required();

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics as JSON");
  stats_cmd->add_option("--corpus", stats.corpus)->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--out", stats.out)->required();

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a topic model");
  fit_cmd->add_option("--corpus", fit_args.corpus)->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--prior", fit_args.prior)
      ->check(CLI::IsMember({"none", "wordfreq", "tfidf", "keyword", "symmetric"}));
  fit_cmd->add_option("--topics", fit_args.topics)->check(CLI::Range(1, 65535));
  fit_cmd->add_option("--stopword-topics", fit_args.stopword_topics)->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--tfidf-topics", fit_args.tfidf_topics)->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--keyword-topics", fit_args.keyword_topics)->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--keywords", fit_args.keywords)->check(CLI::ExistingFile);
  fit_cmd->add_option("--c1", fit_args.c1)->check(positive);
  fit_cmd->add_option("--c2", fit_args.c2)->check(positive);
  fit_cmd->add_option("--c", fit_args.c)->check(positive);
  fit_cmd->add_option("--alpha", fit_args.alpha)->check(positive);
  fit_cmd->add_option("--eta", fit_args.eta)->check(positive);
  fit_cmd->add_option("--iters", fit_args.iters)->check(positive);
  fit_cmd->add_option("--burn-in", fit_args.burn_in)->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--seed", fit_args.seed);
  fit_cmd->add_option("--out", fit_args.out)->required();

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score a fitted model");
  score_cmd->add_option("--model", score.model)->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--corpus", score.corpus)->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--stoplist", score.stoplist)->check(CLI::ExistingFile);
  score_cmd->add_option("--whitelist", score.whitelist)->check(CLI::ExistingFile);
  score_cmd->add_option("--top", score.top)->check(CLI::IsMember({10, 30}));
  score_cmd->add_option("--out", score.out, "Report output (.csv or .json)")->required();

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a variant grid");
  exp_cmd->add_option("--plan", exp.plan)->check(CLI::ExistingFile);
  exp_cmd->add_option("--out-dir", exp.out_dir);
  exp_cmd->add_option("--jobs", exp.jobs)->check(positive);
  exp_cmd->add_option("--corpus", exp.corpus);
  exp_cmd->add_option("--variants", exp.variants);
  exp_cmd->add_option("--topics", exp.topics)->check(CLI::Range(1, 65535));
  exp_cmd->add_option("--iters", exp.iters)->check(positive);
  exp_cmd->add_option("--c1", exp.c1)->check(positive);
  exp_cmd->add_option("--c2", exp.c2)->check(positive);
  exp_cmd->add_option("--c", exp.c)->check(positive);
  exp_cmd->add_option("--tfidf-topics", exp.tfidf_topics)->check(CLI::NonNegativeNumber);
  exp_cmd->add_option("--keyword-topics", exp.keyword_topics)->check(CLI::NonNegativeNumber);
  exp_cmd->add_option("--seeds", exp.seeds);
  exp_cmd->add_option("--stoplist", exp.stoplist);
  exp_cmd->add_option("--whitelist", exp.whitelist);
  exp_cmd->add_option("--keywords", exp.keywords);
  exp_cmd->add_option("--alpha", exp.alpha)->check(positive);
  exp_cmd->add_option("--eta", exp.eta)->check(positive);
  exp_cmd->add_option("--tfidf-cut", exp.tfidf_cut)->check(CLI::Range(0.0, 1.0));
  exp_cmd->add_option("--top", exp.top)->check(CLI::IsMember({10, 30}));

  ReportArgs rep;
  auto* report_cmd = app.add_subcommand("report", "Tabulate stored run records");
  report_cmd->add_option("--runs", rep.runs)->required();
  report_cmd->add_option("--format", rep.format)->check(CLI::IsMember({"csv", "json"}));
  report_cmd->add_option("--out", rep.out);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: UsageError: " << first_line(e.what()) << '\n';
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (ingest_cmd->parsed()) return run_ingest(ingest, out);
    if (stats_cmd->parsed()) return run_stats(stats, out);
    if (fit_cmd->parsed()) return run_fit(fit_args, out);
    if (score_cmd->parsed()) return run_score(score, out);
    if (exp_cmd->parsed()) return run_experiment(*exp_cmd, exp, out);
    return run_report(rep, out);
  } catch (const UsageError& e) {
    err << "error: UsageError: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << first_line(e.what()) << '\n';
    return kExitRuntime;
  } catch (const nlohmann::json::exception& e) {
    err << "error: ParseError: " << first_line(e.what()) << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: IoError: " << first_line(e.what()) << '\n';
    return kExitRuntime;
  }
}

}  // namespace iprior::cli
