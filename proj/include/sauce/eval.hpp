#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sauce/corpus.hpp"

namespace sauce {

/// Domain lexicon used only for evaluation. Phrases are kept in
/// normalize_text() form; blank entries are dropped.
class PhraseSet {
 public:
  PhraseSet() = default;
  explicit PhraseSet(const std::vector<std::string>& raw);

  const std::vector<std::string>& phrases() const noexcept { return phrases_; }
  std::size_t size() const noexcept { return phrases_.size(); }
  bool empty() const noexcept { return phrases_.empty(); }

 private:
  std::vector<std::string> phrases_;
};

// One phrase per line, UTF-8.
PhraseSet load_phrases(const std::filesystem::path& path);

struct CoverageResult {
  double fraction = 0.0;
  std::size_t found_count = 0;
  std::vector<bool> found;  // parallel to PhraseSet::phrases()
};

/// A phrase is found when it is a substring of some retrieved document's
/// normalized text. Throws InputError for an empty phrase set.
CoverageResult coverage(const PhraseSet& phrases, std::span<const Document> retrieved);

/// Which phrases each corpus document contains, computed once so coverage
/// over many retrieved subsets (ablation sweeps, trials) is cheap.
class PhraseOccurrences {
 public:
  PhraseOccurrences(const PhraseSet& phrases, std::span<const Document> corpus,
                    unsigned threads = 1);

  const PhraseSet& phrases() const noexcept { return phrases_; }
  std::optional<std::size_t> ordinal(std::string_view doc_id) const;
  std::span<const std::uint32_t> phrases_in(std::size_t doc) const { return hits_.at(doc); }
  // Number of corpus documents containing phrase p.
  std::uint64_t corpus_frequency(std::size_t p) const { return frequency_.at(p); }

  // Unknown doc ids contribute nothing.
  CoverageResult coverage(std::span<const std::string> retrieved_ids) const;

 private:
  PhraseSet phrases_;
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> ordinal_;
  std::vector<std::vector<std::uint32_t>> hits_;
  std::vector<std::uint64_t> frequency_;
};

// doc_id -> relevant. Unjudged documents count as non-relevant.
using Judgments = std::unordered_map<std::string, bool>;

// TSV lines "doc_id<TAB>0|1".
Judgments load_judgments(const std::filesystem::path& path);

/// nDCG@n with binary gains and log2(i + 1) discounts, positions from 1.
/// The ideal ranking places all judged-relevant documents first. 0 when
/// nothing is judged relevant.
double ndcg(std::span<const std::string> ranked, const Judgments& judgments, std::size_t n);

struct MapRecall {
  double map = 0.0;
  double recall = 0.0;
};

// Single-query AP over the top n: mean of precision@i at relevant retrieved
// positions. Recall@n: relevant retrieved / all judged relevant.
MapRecall map_and_recall(std::span<const std::string> ranked, const Judgments& judgments,
                         std::size_t n);

struct PrPoint {
  double recall;
  double precision;
  bool operator==(const PrPoint&) const = default;
};

// One point per rank. Throws InputError if nothing is judged relevant.
std::vector<PrPoint> pr_curve(std::span<const std::string> ranked, const Judgments& judgments);

struct HistogramRow {
  std::string phrase;
  std::uint64_t frequency = 0;  // corpus documents containing the phrase
  bool found = false;           // contained in some retrieved document
};

// Rows sorted by frequency descending; ties keep lexicon order.
std::vector<HistogramRow> term_histogram(const PhraseOccurrences& occurrences,
                                         std::span<const std::string> retrieved_ids);

struct AblationRow {
  std::size_t top_k;
  std::size_t not_found;
};

/// Runs `retrieve(top_k)` for each k (ascending) and counts lexicon entries
/// missing from the retrieved set.
std::vector<AblationRow> ablation_sweep(
    const std::function<std::vector<std::string>(std::size_t)>& retrieve,
    const PhraseOccurrences& occurrences, std::span<const std::size_t> ks);

// Average coverage fraction over seeded trials of a randomized method.
double mean_trial_coverage(
    const std::function<std::vector<std::string>(std::uint64_t)>& run_with_seed,
    const PhraseOccurrences& occurrences, std::span<const std::uint64_t> rng_seeds);

using Millis = std::chrono::duration<double, std::milli>;

/// Runs fn() and reports wall-clock time on a monotone clock.
template <typename Fn>
auto timed(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  if constexpr (std::is_void_v<std::invoke_result_t<Fn>>) {
    fn();
    return Millis(std::chrono::steady_clock::now() - start);
  } else {
    auto result = fn();
    return std::pair{std::move(result), Millis(std::chrono::steady_clock::now() - start)};
  }
}

struct EvalReport {
  CoverageResult coverage;
  std::optional<double> ndcg;
  std::optional<double> recall;
  std::optional<double> map;
  std::optional<double> elapsed_ms;
  std::vector<PrPoint> pr;
  std::vector<HistogramRow> histogram;
  std::vector<AblationRow> ablation;

  // Summary keys: coverage, ndcg, recall, map, elapsed_ms (null when absent),
  // plus found/total phrase counts.
  nlohmann::json summary_json() const;
};

std::string histogram_tsv(const std::vector<HistogramRow>& rows);
std::string ablation_tsv(const std::vector<AblationRow>& rows);
std::string pr_tsv(const std::vector<PrPoint>& points);

}  // namespace sauce
