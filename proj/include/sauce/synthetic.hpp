#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sauce/corpus.hpp"

namespace sauce {

/// Desk-scale stand-in for a web crawl: Zipfian background text plus a small
/// planted domain sub-corpus whose lexicon phrases sit in the long tail.
struct SyntheticConfig {
  std::size_t n_docs = 10000;
  std::size_t background_vocab = 20000;
  double background_zipf = 1.1;
  std::size_t domain_docs = 400;      // planted inside n_docs
  std::size_t domain_vocab = 800;
  double domain_zipf = 1.0;
  double domain_token_share = 0.35;   // fraction of a domain doc drawn from domain vocab
  std::size_t min_len = 60;
  std::size_t max_len = 160;
  std::size_t n_phrases = 100;
  std::size_t max_phrase_docs = 40;   // planting count of the most common phrase
  std::size_t n_seeds = 20;           // extra domain docs, not in the corpus
  std::uint64_t seed = 7;
};

struct SyntheticCorpus {
  std::vector<Document> docs;
  std::vector<Document> seeds;
  std::vector<std::string> phrases;
  std::vector<std::string> domain_ids;
};

SyntheticCorpus generate_corpus(const SyntheticConfig& config);

void write_jsonl(std::span<const Document> docs, const std::filesystem::path& path);

}  // namespace sauce
