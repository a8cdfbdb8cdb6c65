// Writes the bundled planted demo corpus, its word lists and a demo plan.
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "iprior/io.hpp"
#include "iprior/synthetic.hpp"

namespace {

std::string sorted_lines(const iprior::WordSet& words) {
  std::vector<std::string> v(words.begin(), words.end());
  std::sort(v.begin(), v.end());
  std::string out;
  for (const auto& w : v) out += w + "\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  const auto planted = iprior::synthetic::stopword_corpus();

  std::string jsonl;
  for (std::size_t d = 0; d < planted.texts.size(); ++d) {
    jsonl += nlohmann::json{{"id", planted.ids[d]}, {"text", planted.texts[d]}}.dump() + "\n";
  }
  iprior::write_file(dir / "planted_demo.jsonl", jsonl);
  iprior::write_file(dir / "planted_stopwords.txt", "# planted stopwords\n" + sorted_lines(planted.stopwords));
  iprior::write_file(dir / "planted_whitelist.txt", "# planted cluster words\n" + sorted_lines(planted.cluster_words));
  iprior::write_file(dir / "planted_keywords.txt", "# seed keywords\n" + sorted_lines(planted.keywords));

  nlohmann::json plan;
  plan["corpus"] = "planted_demo.jsonl";
  plan["whitelist"] = "planted_whitelist.txt";
  plan["keywords"] = "planted_keywords.txt";
  plan["variants"] = {"NoDeletion",    "StopwordDeletion", "TfIdfDeletion",
                      "KeywordTopicsBaseline", "HyperparamOpt",  "DeletionPlusHyperparamOpt",
                      "WordFreqPrior", "TfIdfPrior",       "KeywordSeedingPrior"};
  plan["grid"] = {{"topics", {20}}, {"iterations", {200}}};
  plan["seeds"] = {1, 2, 3};
  iprior::write_file(dir / "planted_plan.json", plan.dump(2) + "\n");

  std::cout << "wrote " << planted.texts.size() << " documents to " << (dir / "planted_demo.jsonl").string() << '\n';
  return 0;
}
