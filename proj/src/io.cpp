#include "iprior/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "iprior/error.hpp"

namespace iprior {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

RawDocuments read_text_documents(const std::filesystem::path& path) {
  RawDocuments raw;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) raw.texts.push_back(line);
  return raw;
}

RawDocuments read_jsonl_documents(const std::filesystem::path& path) {
  RawDocuments raw;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      raw.texts.push_back(j.at("text").get<std::string>());
      raw.ids.push_back(j.contains("id") ? j.at("id").get<std::string>() : std::to_string(line_no - 1));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return raw;
}

RawDocuments read_documents(const std::filesystem::path& path, InputFormat format) {
  return format == InputFormat::kJsonl ? read_jsonl_documents(path) : read_text_documents(path);
}

WordSet parse_word_list(std::string_view text) {
  WordSet words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    words.insert(line.substr(b, e - b + 1));
  }
  return words;
}

WordSet read_word_list(const std::filesystem::path& path) { return parse_word_list(read_file(path)); }

json to_json(const Corpus& corpus) {
  json j;
  j["version"] = kFormatVersion;
  j["vocabulary"] = corpus.vocabulary.words();
  j["documents"] = corpus.documents;
  if (!corpus.doc_ids.empty()) j["doc_ids"] = corpus.doc_ids;
  return j;
}

namespace {

void check_version(const json& j, std::string_view what) {
  const int v = j.at("version").get<int>();
  if (v != kFormatVersion) {
    throw Error(ErrorCode::kParse, std::string(what) + " has unsupported version " + std::to_string(v));
  }
}

template <typename F>
auto parse_guard(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

}  // namespace

Corpus corpus_from_json(const json& j) {
  return parse_guard("corpus", [&] {
    check_version(j, "corpus");
    Corpus c;
    c.vocabulary = Vocabulary(j.at("vocabulary").get<std::vector<std::string>>());
    c.documents = j.at("documents").get<std::vector<Document>>();
    if (j.contains("doc_ids")) c.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
    for (const auto& doc : c.documents) {
      for (WordId w : doc) {
        if (w >= c.vocab_size()) throw Error(ErrorCode::kParse, "corpus token id outside the vocabulary");
      }
    }
    return c;
  });
}

Corpus load_corpus(const std::filesystem::path& path, const WordSet& remove_set) {
  const auto ext = path.extension().string();
  if (ext == ".json") {
    Corpus c = parse_guard("corpus", [&] { return corpus_from_json(json::parse(read_file(path))); });
    return remove_set.empty() ? c : delete_stopwords(c, remove_set);
  }
  RawDocuments raw = read_documents(path, ext == ".jsonl" ? InputFormat::kJsonl : InputFormat::kText);
  return build_corpus(raw.texts, remove_set, std::move(raw.ids));
}

json to_json(const CorpusStats& stats, const Vocabulary& vocab) {
  json j;
  j["version"] = kFormatVersion;
  j["n_docs"] = stats.n_docs;
  j["n_tokens"] = stats.n_tokens;
  json words = json::array();
  for (WordId w = 0; w < stats.vocab_size(); ++w) {
    words.push_back({{"word", vocab.word(w)},
                     {"count", stats.word_count[w]},
                     {"b", stats.b[w]},
                     {"doc_freq", stats.doc_freq[w]},
                     {"avg_tfidf", stats.avg_tfidf[w]}});
  }
  j["words"] = std::move(words);
  return j;
}

json to_json(const PriorMatrix& prior) {
  json j;
  j["version"] = kFormatVersion;
  json kinds = json::array();
  for (auto k : prior.kinds) kinds.push_back(std::string(to_string(k)));
  j["kinds"] = std::move(kinds);
  json rows = json::array();
  for (std::size_t k = 0; k < prior.num_topics(); ++k) {
    const auto r = prior.weights.row(k);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  j["weights"] = std::move(rows);
  return j;
}

namespace {

template <typename T>
Matrix<T> matrix_from_rows(const json& rows, std::string_view what) {
  const std::size_t n = rows.size();
  const std::size_t m = n == 0 ? 0 : rows.at(0).size();
  Matrix<T> out(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows.at(r).size() != m) throw Error(ErrorCode::kParse, std::string(what) + " rows are ragged");
    for (std::size_t c = 0; c < m; ++c) out(r, c) = rows.at(r).at(c).get<T>();
  }
  return out;
}

template <typename T>
json rows_to_json(const Matrix<T>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<T>(row.begin(), row.end()));
  }
  return rows;
}

std::vector<TopicKind> kinds_from_json(const json& j) {
  std::vector<TopicKind> kinds;
  for (const auto& k : j) kinds.push_back(parse_topic_kind(k.get<std::string>()));
  return kinds;
}

json kinds_to_json(const std::vector<TopicKind>& kinds) {
  json out = json::array();
  for (auto k : kinds) out.push_back(std::string(to_string(k)));
  return out;
}

}  // namespace

PriorMatrix prior_from_json(const json& j) {
  return parse_guard("prior", [&] {
    check_version(j, "prior");
    PriorMatrix p{matrix_from_rows<double>(j.at("weights"), "prior weights"), kinds_from_json(j.at("kinds"))};
    if (p.kinds.size() != p.num_topics()) throw Error(ErrorCode::kParse, "prior kinds and rows differ in count");
    return p;
  });
}

json to_json(const ModelConfig& config) {
  return {{"num_topics", config.num_topics},
          {"alpha", config.alpha},
          {"iterations", config.iterations},
          {"burn_in", config.resolved_burn_in()},
          {"seed", config.seed},
          {"average_estimates", config.average_estimates}};
}

ModelConfig model_config_from_json(const json& j) {
  ModelConfig c;
  c.num_topics = j.at("num_topics").get<int>();
  c.alpha = j.at("alpha").get<double>();
  c.iterations = j.at("iterations").get<int>();
  c.burn_in = j.at("burn_in").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.average_estimates = j.value("average_estimates", false);
  return c;
}

json to_json(const FittedModel& model) {
  json j;
  j["version"] = kFormatVersion;
  j["config"] = to_json(model.config);
  j["vocabulary"] = model.vocabulary;
  j["kinds"] = kinds_to_json(model.kinds);
  j["beta_hat"] = rows_to_json(model.beta_hat);
  j["theta_hat"] = rows_to_json(model.theta_hat);
  j["loglik_trace"] = model.loglik_trace;
  return j;
}

FittedModel model_from_json(const json& j) {
  return parse_guard("model", [&] {
    check_version(j, "model");
    FittedModel m;
    m.config = model_config_from_json(j.at("config"));
    m.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
    m.kinds = kinds_from_json(j.at("kinds"));
    m.beta_hat = matrix_from_rows<double>(j.at("beta_hat"), "beta_hat");
    m.theta_hat = matrix_from_rows<double>(j.at("theta_hat"), "theta_hat");
    m.loglik_trace = j.at("loglik_trace").get<std::vector<double>>();
    if (m.beta_hat.cols() != m.vocabulary.size() || m.kinds.size() != m.beta_hat.rows()) {
      throw Error(ErrorCode::kParse, "model dimensions are inconsistent");
    }
    return m;
  });
}

namespace {

// JSON has no infinities; a PMI of -inf (no co-occurring pair) becomes null.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? -std::numeric_limits<double>::infinity() : j.get<double>();
}

ScoreValues values_from_json(const json& j) {
  ScoreValues v;
  v.coherence_10 = number_from(j.at("coherence_10"));
  v.coherence_30 = number_from(j.at("coherence_30"));
  v.pmi = number_from(j.at("pmi"));
  v.log_lift = number_from(j.at("log_lift"));
  v.stopword_rate = number_from(j.at("stopword_rate"));
  v.expert_rate = number_from(j.at("expert_rate"));
  v.codoc = number_from(j.at("codoc"));
  return v;
}

}  // namespace

json to_json(const ScoreValues& v) {
  return {{"coherence_10", number_or_null(v.coherence_10)},
          {"coherence_30", number_or_null(v.coherence_30)},
          {"pmi", number_or_null(v.pmi)},
          {"log_lift", number_or_null(v.log_lift)},
          {"stopword_rate", number_or_null(v.stopword_rate)},
          {"expert_rate", number_or_null(v.expert_rate)},
          {"codoc", number_or_null(v.codoc)}};
}

json to_json(const ModelReport& report) {
  json j;
  j["version"] = kFormatVersion;
  j["vocab_size"] = report.vocab_size;
  json topics = json::array();
  for (const auto& s : report.per_topic) {
    json t = to_json(s.values);
    t["kind"] = std::string(to_string(s.kind));
    topics.push_back(std::move(t));
  }
  j["per_topic"] = std::move(topics);
  j["mean_all"] = to_json(report.mean_all);
  j["mean_domain"] = report.mean_domain ? to_json(*report.mean_domain) : json(nullptr);
  return j;
}

ModelReport report_from_json(const json& j) {
  return parse_guard("report", [&] {
    check_version(j, "report");
    ModelReport r;
    r.vocab_size = j.at("vocab_size").get<std::size_t>();
    for (const auto& t : j.at("per_topic")) {
      r.per_topic.push_back({values_from_json(t), parse_topic_kind(t.at("kind").get<std::string>())});
    }
    r.mean_all = values_from_json(j.at("mean_all"));
    if (!j.at("mean_domain").is_null()) r.mean_domain = values_from_json(j.at("mean_domain"));
    return r;
  });
}

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string report_to_csv(const ModelReport& report) {
  std::ostringstream out;
  out << "topic,coherence_10,coherence_30,pmi,log_lift,stopword_rate,expert_rate,codoc,kind\n";
  auto row = [&](const std::string& label, const ScoreValues& v, std::string_view kind) {
    out << label << ',' << format_double(v.coherence_10) << ',' << format_double(v.coherence_30) << ','
        << format_double(v.pmi) << ',' << format_double(v.log_lift) << ',' << format_double(v.stopword_rate)
        << ',' << format_double(v.expert_rate) << ',' << format_double(v.codoc) << ',' << kind << '\n';
  };
  for (std::size_t k = 0; k < report.per_topic.size(); ++k) {
    row(std::to_string(k), report.per_topic[k].values, to_string(report.per_topic[k].kind));
  }
  row("mean_all", report.mean_all, "");
  if (report.mean_domain) row("mean_domain", *report.mean_domain, "");
  return out.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

}  // namespace iprior
