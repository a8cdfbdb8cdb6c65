#include <algorithm>
#include <cmath>
#include <string>

#include "doctest.h"

#include "alice.hpp"
#include "iprior/error.hpp"
#include "iprior/io.hpp"
#include "iprior/log.hpp"
#include "iprior/priors.hpp"

using namespace iprior;

namespace {

struct CapturedLog {
  std::vector<std::string> lines;
  CapturedLog() {
    set_log_sink([this](LogLevel, const std::string& m) { lines.push_back(m); });
  }
  ~CapturedLog() { set_log_sink({}); }
};

WordSet alice_keywords() {
  const auto& k = testing::alice_keywords();
  return WordSet(k.begin(), k.end());
}

bool has_warning(const std::vector<PriorDiagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const auto& d) { return d.severity == PriorDiagnostic::Severity::kWarning; });
}

bool has_error(const std::vector<PriorDiagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const auto& d) { return d.severity == PriorDiagnostic::Severity::kError; });
}

}  // namespace

TEST_CASE("stopword and symmetric rows") {
  CHECK(stopword_prior(3) == std::vector<double>{1, 1, 1});
  CHECK(stopword_prior(1) == std::vector<double>{1});
  CHECK(symmetric_prior(2, 0.5) == std::vector<double>{0.5, 0.5});
  const auto alice = build_corpus(testing::alice_lines());
  CHECK(stopword_prior(alice.vocab_size()) == std::vector<double>(testing::kAliceVocab, 1.0));
}

TEST_CASE("wordfreq_prior is the reciprocal frequency") {
  const auto half = compute_stats(build_corpus({"a b"}));
  CHECK(wordfreq_prior(half)[0] == 2.0);

  const auto uniform = compute_stats(build_corpus({"a b c d", "d c b a"}));
  for (double w : wordfreq_prior(uniform)) CHECK(w == doctest::Approx(4.0));

  const auto alice = build_corpus(testing::alice_lines());
  const auto stats = compute_stats(alice);
  const auto row = wordfreq_prior(stats);
  for (WordId w = 0; w < row.size(); ++w) CHECK(std::abs(row[w] * stats.b[w] - 1.0) < 1e-12);
  for (const auto& ref : testing::alice_reference()) {
    CAPTURE(ref.word);
    CHECK(std::abs(row[*alice.vocabulary.find(ref.word)] - ref.wf_prior) < 1e-9);
  }
}

TEST_CASE("tfidf_prior clamps at the floor and scales with c1") {
  const auto c = build_corpus({"x y", "x z", "x"});
  const auto s = compute_stats(c);
  const auto row = tfidf_prior(s, 1.0, 1e-6);
  CHECK(row[*c.vocabulary.find("x")] == 1e-6);

  const auto alice = build_corpus(testing::alice_lines());
  const auto stats = compute_stats(alice);
  const auto one = tfidf_prior(stats, 1.0, 1e-6);
  const auto two = tfidf_prior(stats, 2.0, 1e-6);
  for (const auto& ref : testing::alice_reference()) {
    const auto id = *alice.vocabulary.find(ref.word);
    CHECK(std::abs(one[id] - ref.tfidf) < 1e-9);
    CHECK(two[id] == doctest::Approx(2.0 * one[id]).epsilon(1e-15));
  }
  CHECK(one[*alice.vocabulary.find("book")] == doctest::Approx(0.11633239394013069).epsilon(1e-12));
}

TEST_CASE("keyword_prior") {
  CapturedLog log;
  const Vocabulary v({"a", "b", "c"});
  CHECK(keyword_prior(v, {}, 2.0, 100.0) == std::vector<double>{2, 2, 2});
  CHECK(keyword_prior(v, {"b"}, 1.0, 100.0) == std::vector<double>{1, 100, 1});

  log.lines.clear();
  const auto partial = keyword_prior(v, {"a", "zzz", "yyy"}, 1.0, 10.0);
  CHECK(partial == std::vector<double>{10, 1, 1});
  REQUIRE(log.lines.size() == 1);
  CHECK(log.lines[0].find("2 of 3") != std::string::npos);

  // Keyword entries agree with the reference row at c = 1; non-keywords carry
  // c2 instead of the reference's 0.
  const auto alice = build_corpus(testing::alice_lines());
  const auto row = keyword_prior(alice.vocabulary, alice_keywords(), 1.0, 1.0);
  for (const auto& ref : testing::alice_reference()) {
    const double got = row[*alice.vocabulary.find(ref.word)];
    if (ref.keyword_ref > 0) {
      CHECK(std::abs(got - ref.keyword_ref) < 1e-9);
    } else {
      CHECK(got == 1.0);
    }
  }
}

TEST_CASE("assemble layouts") {
  const auto alice = build_corpus(testing::alice_lines());
  const auto stats = compute_stats(alice);

  const auto tf = assemble(PriorConfig::tfidf_layout(20, 1), stats, alice.vocabulary);
  REQUIRE(tf.num_topics() == 20);
  CHECK(tf.vocab_size() == alice.vocab_size());
  CHECK(tf.kinds[0] == TopicKind::kStopword);
  CHECK(std::count(tf.kinds.begin(), tf.kinds.end(), TopicKind::kTfIdf) == 19);

  const auto seed = assemble(PriorConfig::keyword_seeding_layout(20, 1, 9, 10), stats, alice.vocabulary,
                             alice_keywords());
  CHECK(std::count(seed.kinds.begin(), seed.kinds.end(), TopicKind::kStopword) == 1);
  CHECK(std::count(seed.kinds.begin(), seed.kinds.end(), TopicKind::kTfIdf) == 9);
  CHECK(std::count(seed.kinds.begin(), seed.kinds.end(), TopicKind::kKeyword) == 10);
  CHECK(seed.kinds[0] == TopicKind::kStopword);
  CHECK(seed.kinds[1] == TopicKind::kTfIdf);
  CHECK(seed.kinds[10] == TopicKind::kKeyword);

  const auto kw = assemble(PriorConfig::keyword_topics_layout(5), stats, alice.vocabulary, alice_keywords());
  CHECK(std::all_of(kw.kinds.begin(), kw.kinds.end(), [](auto k) { return k == TopicKind::kKeyword; }));

  const auto wf = assemble(PriorConfig::wordfreq_layout(4, 1), stats, alice.vocabulary);
  CHECK(wf.kinds == std::vector<TopicKind>{TopicKind::kStopword, TopicKind::kWordFrequency,
                                          TopicKind::kWordFrequency, TopicKind::kWordFrequency});

  PriorConfig padded;
  padded.num_topics = 4;
  padded.stopword_topics = 1;
  padded.tfidf_topics = 1;
  padded.symmetric_eta = 0.5;
  const auto pad = assemble(padded, stats, alice.vocabulary);
  CHECK(pad.kinds[3] == TopicKind::kSymmetric);
  CHECK(pad.row_sum(3) == doctest::Approx(0.5 * alice.vocab_size()));

  CHECK(assemble(PriorConfig::tfidf_layout(20, 1), stats, alice.vocabulary) == tf);
  for (double x : seed.weights.data()) CHECK(x >= 1e-6);
}

TEST_CASE("assemble rejects bad configurations") {
  const auto alice = build_corpus(testing::alice_lines());
  const auto stats = compute_stats(alice);
  auto code_of = [&](const PriorConfig& pc) {
    try {
      assemble(pc, stats, alice.vocabulary);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  CHECK(code_of(PriorConfig::keyword_seeding_layout(10, 1, 9, 10)) == ErrorCode::kConfigMismatch);
  PriorConfig neg = PriorConfig::tfidf_layout(5, 1);
  neg.c1 = -1;
  CHECK(code_of(neg) == ErrorCode::kConfigMismatch);
  PriorConfig zero_floor = PriorConfig::tfidf_layout(5, 1);
  zero_floor.floor = 0;
  CHECK(code_of(zero_floor) == ErrorCode::kConfigMismatch);

  const Vocabulary other({"just", "two"});
  try {
    assemble(PriorConfig::tfidf_layout(5, 1), stats, other);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("validate") {
  const auto alice = build_corpus(testing::alice_lines());
  const auto stats = compute_stats(alice);

  PriorConfig one_each = PriorConfig::tfidf_layout(2, 1);
  CHECK_FALSE(has_warning(validate(assemble(one_each, stats, alice.vocabulary))));

  PriorConfig heavy = one_each;
  heavy.c1 = 1000;
  CHECK(has_warning(validate(assemble(heavy, stats, alice.vocabulary))));

  // Default settings: K = 20, I = 1, c1 = 1. One stopword row weighs V = 44,
  // each TF-IDF row about 10.34.
  const auto defaults = validate(assemble(PriorConfig::tfidf_layout(20, 1), stats, alice.vocabulary));
  CHECK_FALSE(has_warning(defaults));
  CHECK_FALSE(has_error(defaults));

  PriorMatrix broken = assemble(one_each, stats, alice.vocabulary);
  broken.weights(1, 0) = 0.0;
  CHECK(has_error(validate(broken)));

  PriorMatrix no_stop = assemble(PriorConfig::tfidf_layout(3, 0), stats, alice.vocabulary);
  CHECK(has_warning(validate(no_stop)));
}

TEST_CASE("prior serialization round trip") {
  const auto alice = build_corpus(testing::alice_lines());
  const auto stats = compute_stats(alice);
  const auto prior = assemble(PriorConfig::keyword_seeding_layout(6, 1, 2, 2), stats, alice.vocabulary,
                              alice_keywords());
  const auto back = prior_from_json(nlohmann::json::parse(to_json(prior).dump()));
  CHECK(back == prior);
  CHECK(parse_topic_kind("tfidf") == TopicKind::kTfIdf);
  CHECK_THROWS_AS(parse_topic_kind("nope"), Error);
}
