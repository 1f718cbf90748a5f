#include "sauce/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "sauce/error.hpp"

namespace sauce {
namespace {

// Pronounceable pseudo-word for an index: base-20 digits mapped to
// consonant-vowel syllables.
std::string make_word(std::size_t index, std::string_view suffix) {
  static constexpr std::string_view kSyllables[] = {
      "ba", "ko", "ri", "mu", "te", "la", "no", "si", "pe", "du",
      "ga", "vi", "lo", "ne", "ru", "ta", "mi", "so", "fe", "zu"};
  std::string w;
  do {
    w += kSyllables[index % 20];
    index /= 20;
  } while (index > 0);
  w += suffix;
  return w;
}

std::discrete_distribution<std::size_t> zipf(std::size_t n, double s) {
  std::vector<double> weights(n);
  for (std::size_t r = 0; r < n; ++r) weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), s);
  return {weights.begin(), weights.end()};
}

}  // namespace

SyntheticCorpus generate_corpus(const SyntheticConfig& c) {
  if (c.domain_docs > c.n_docs) throw InputError("domain_docs exceeds n_docs");
  if (c.min_len < 1 || c.max_len < c.min_len) throw InputError("bad document length range");
  if (c.domain_vocab < 2 * c.n_phrases) throw InputError("domain vocabulary too small for phrases");

  std::mt19937_64 rng(c.seed);
  auto background = zipf(c.background_vocab, c.background_zipf);
  auto domain = zipf(c.domain_vocab, c.domain_zipf);
  std::uniform_int_distribution<std::size_t> length(c.min_len, c.max_len);
  std::bernoulli_distribution from_domain(c.domain_token_share);

  auto make_tokens = [&](bool is_domain) {
    std::vector<std::string> tokens(length(rng));
    for (auto& t : tokens) {
      t = is_domain && from_domain(rng) ? make_word(domain(rng), "x")
                                        : make_word(background(rng), "");
    }
    return tokens;
  };

  // Lexicon phrases: adjacent pairs of tail domain words.
  SyntheticCorpus out;
  const auto tail_start = c.domain_vocab - 2 * c.n_phrases;
  for (std::size_t p = 0; p < c.n_phrases; ++p) {
    out.phrases.push_back(make_word(tail_start + 2 * p, "x") + " " +
                          make_word(tail_start + 2 * p + 1, "x"));
  }

  // Domain documents are spread through the corpus.
  std::vector<std::size_t> positions(c.n_docs);
  std::iota(positions.begin(), positions.end(), 0);
  std::vector<std::size_t> domain_pos;
  std::sample(positions.begin(), positions.end(), std::back_inserter(domain_pos), c.domain_docs, rng);
  std::vector<bool> is_domain(c.n_docs, false);
  for (auto p : domain_pos) is_domain[p] = true;

  std::vector<std::vector<std::string>> tokens(c.n_docs);
  for (std::size_t d = 0; d < c.n_docs; ++d) tokens[d] = make_tokens(is_domain[d]);

  // Phrase p is planted in about max_phrase_docs / (p + 1) domain documents.
  for (std::size_t p = 0; p < c.n_phrases && !domain_pos.empty(); ++p) {
    const auto copies = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(static_cast<double>(c.max_phrase_docs) / (p + 1))), 1,
        domain_pos.size());
    std::vector<std::size_t> hosts;
    std::sample(domain_pos.begin(), domain_pos.end(), std::back_inserter(hosts), copies, rng);
    for (auto d : hosts) {
      auto& t = tokens[d];
      std::uniform_int_distribution<std::size_t> at(0, t.size());
      t.insert(t.begin() + static_cast<std::ptrdiff_t>(at(rng)), out.phrases[p]);
    }
  }

  auto join = [](const std::vector<std::string>& t) {
    std::string s;
    for (const auto& w : t) {
      if (!s.empty()) s += ' ';
      s += w;
    }
    return s;
  };

  out.docs.reserve(c.n_docs);
  for (std::size_t d = 0; d < c.n_docs; ++d) {
    auto id = "doc" + std::to_string(d);
    if (is_domain[d]) out.domain_ids.push_back(id);
    out.docs.push_back(make_document(std::move(id), join(tokens[d])));
  }
  for (std::size_t s = 0; s < c.n_seeds; ++s) {
    out.seeds.push_back(make_document("seed" + std::to_string(s), join(make_tokens(true))));
  }
  return out;
}

void write_jsonl(std::span<const Document> docs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  for (const auto& d : docs) out << nlohmann::json{{"id", d.id}, {"text", d.text}}.dump() << '\n';
  if (!out) throw InputError("write failed: " + path.string());
}

}  // namespace sauce
