#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "iprior/corpus.hpp"
#include "iprior/metrics.hpp"
#include "iprior/priors.hpp"
#include "iprior/sampler.hpp"

namespace iprior {

inline constexpr int kFormatVersion = 1;

enum class InputFormat { kText, kJsonl };

struct RawDocuments {
  std::vector<std::string> texts;
  std::vector<std::string> ids;  // empty for plain text input
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// One document per line.
RawDocuments read_text_documents(const std::filesystem::path& path);
/// JSON lines with {"id": string, "text": string}; blank lines are skipped.
RawDocuments read_jsonl_documents(const std::filesystem::path& path);
RawDocuments read_documents(const std::filesystem::path& path, InputFormat format);

/// One word per line; '#' starts a comment, surrounding whitespace is dropped.
WordSet read_word_list(const std::filesystem::path& path);
WordSet parse_word_list(std::string_view text);

nlohmann::json to_json(const Corpus& corpus);
Corpus corpus_from_json(const nlohmann::json& j);

/// Serialized corpus (.json), JSON lines (.jsonl) or plain text (anything else).
Corpus load_corpus(const std::filesystem::path& path, const WordSet& remove_set = {});

nlohmann::json to_json(const CorpusStats& stats, const Vocabulary& vocab);

nlohmann::json to_json(const PriorMatrix& prior);
PriorMatrix prior_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FittedModel& model);
FittedModel model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ScoreValues& values);
nlohmann::json to_json(const ModelReport& report);
ModelReport report_from_json(const nlohmann::json& j);
std::string report_to_csv(const ModelReport& report);

/// Shortest decimal form that round-trips.
std::string format_double(double x);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t x);

}  // namespace iprior
