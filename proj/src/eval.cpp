#include "sauce/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sauce/error.hpp"
#include "sauce/parallel.hpp"

namespace sauce {
namespace {

std::size_t relevant_total(const Judgments& judgments) {
  return static_cast<std::size_t>(std::count_if(judgments.begin(), judgments.end(),
                                                [](const auto& kv) { return kv.second; }));
}

bool is_relevant(const Judgments& judgments, const std::string& id) {
  auto it = judgments.find(id);
  return it != judgments.end() && it->second;
}

CoverageResult finish(std::vector<bool> found) {
  if (found.empty()) throw InputError("coverage is undefined for an empty phrase set");
  CoverageResult r;
  r.found_count = static_cast<std::size_t>(std::count(found.begin(), found.end(), true));
  r.fraction = static_cast<double>(r.found_count) / static_cast<double>(found.size());
  r.found = std::move(found);
  return r;
}

}  // namespace

PhraseSet::PhraseSet(const std::vector<std::string>& raw) {
  phrases_.reserve(raw.size());
  for (const auto& p : raw) {
    auto norm = normalize_text(p);
    if (!norm.empty()) phrases_.push_back(std::move(norm));
  }
}

PhraseSet load_phrases(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  return PhraseSet(lines);
}

CoverageResult coverage(const PhraseSet& phrases, std::span<const Document> retrieved) {
  std::vector<bool> found(phrases.size(), false);
  for (const auto& doc : retrieved) {
    const auto text = normalize_text(doc.text);
    for (std::size_t p = 0; p < phrases.size(); ++p) {
      if (!found[p] && text.find(phrases.phrases()[p]) != std::string::npos) found[p] = true;
    }
  }
  return finish(std::move(found));
}

PhraseOccurrences::PhraseOccurrences(const PhraseSet& phrases, std::span<const Document> corpus,
                                     unsigned threads)
    : phrases_(phrases), hits_(corpus.size()), frequency_(phrases.size(), 0) {
  ordinal_.reserve(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) ordinal_.try_emplace(corpus[d].id, d);

  const auto& list = phrases_.phrases();
  for_each_partition(partition_range(corpus.size(), threads), [&](std::size_t, Range r) {
    for (auto d = r.begin; d < r.end; ++d) {
      const auto text = normalize_text(corpus[d].text);
      for (std::uint32_t p = 0; p < list.size(); ++p) {
        if (text.find(list[p]) != std::string::npos) hits_[d].push_back(p);
      }
    }
  });
  for (const auto& h : hits_) {
    for (auto p : h) ++frequency_[p];
  }
}

std::optional<std::size_t> PhraseOccurrences::ordinal(std::string_view doc_id) const {
  auto it = ordinal_.find(doc_id);
  if (it == ordinal_.end()) return std::nullopt;
  return it->second;
}

CoverageResult PhraseOccurrences::coverage(std::span<const std::string> retrieved_ids) const {
  std::vector<bool> found(phrases_.size(), false);
  for (const auto& id : retrieved_ids) {
    if (auto d = ordinal(id)) {
      for (auto p : hits_[*d]) found[p] = true;
    }
  }
  return finish(std::move(found));
}

Judgments load_judgments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  Judgments j;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    const auto value = tab == std::string::npos ? std::string() : line.substr(tab + 1);
    if (value != "0" && value != "1") {
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": expected doc_id<TAB>0|1");
    }
    j[line.substr(0, tab)] = value == "1";
  }
  return j;
}

double ndcg(std::span<const std::string> ranked, const Judgments& judgments, std::size_t n) {
  if (n < 1) throw InputError("cutoff must be >= 1");
  const auto total = relevant_total(judgments);
  if (total == 0) return 0.0;
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(n, ranked.size()); ++i) {
    if (is_relevant(judgments, ranked[i])) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  double ideal = 0.0;
  for (std::size_t i = 0; i < std::min(n, total); ++i) {
    ideal += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg / ideal;
}

MapRecall map_and_recall(std::span<const std::string> ranked, const Judgments& judgments,
                         std::size_t n) {
  if (n < 1) throw InputError("cutoff must be >= 1");
  const auto total = relevant_total(judgments);
  std::size_t hits = 0;
  double precision_sum = 0.0;
  for (std::size_t i = 0; i < std::min(n, ranked.size()); ++i) {
    if (is_relevant(judgments, ranked[i])) {
      ++hits;
      precision_sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  MapRecall r;
  if (hits > 0) r.map = precision_sum / static_cast<double>(hits);
  if (total > 0) r.recall = static_cast<double>(hits) / static_cast<double>(total);
  return r;
}

std::vector<PrPoint> pr_curve(std::span<const std::string> ranked, const Judgments& judgments) {
  const auto total = relevant_total(judgments);
  if (total == 0) throw InputError("precision-recall curve needs a relevant judgment");
  std::vector<PrPoint> points;
  points.reserve(ranked.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (is_relevant(judgments, ranked[i])) ++hits;
    points.push_back({static_cast<double>(hits) / static_cast<double>(total),
                      static_cast<double>(hits) / static_cast<double>(i + 1)});
  }
  return points;
}

std::vector<HistogramRow> term_histogram(const PhraseOccurrences& occurrences,
                                         std::span<const std::string> retrieved_ids) {
  const auto& phrases = occurrences.phrases().phrases();
  std::vector<bool> found(phrases.size(), false);
  for (const auto& id : retrieved_ids) {
    if (auto d = occurrences.ordinal(id)) {
      for (auto p : occurrences.phrases_in(*d)) found[p] = true;
    }
  }
  std::vector<HistogramRow> rows;
  rows.reserve(phrases.size());
  for (std::size_t p = 0; p < phrases.size(); ++p) {
    rows.push_back({phrases[p], occurrences.corpus_frequency(p), found[p]});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.frequency > b.frequency; });
  return rows;
}

std::vector<AblationRow> ablation_sweep(
    const std::function<std::vector<std::string>(std::size_t)>& retrieve,
    const PhraseOccurrences& occurrences, std::span<const std::size_t> ks) {
  if (!std::is_sorted(ks.begin(), ks.end())) throw InputError("ablation ks must be ascending");
  std::vector<AblationRow> rows;
  rows.reserve(ks.size());
  for (auto k : ks) {
    const auto ids = retrieve(k);
    const auto cov = occurrences.coverage(ids);
    rows.push_back({k, occurrences.phrases().size() - cov.found_count});
  }
  return rows;
}

double mean_trial_coverage(
    const std::function<std::vector<std::string>(std::uint64_t)>& run_with_seed,
    const PhraseOccurrences& occurrences, std::span<const std::uint64_t> rng_seeds) {
  if (rng_seeds.empty()) throw InputError("need at least one trial seed");
  double sum = 0.0;
  for (auto seed : rng_seeds) sum += occurrences.coverage(run_with_seed(seed)).fraction;
  return sum / static_cast<double>(rng_seeds.size());
}

nlohmann::json EvalReport::summary_json() const {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {
      {"coverage", coverage.fraction},
      {"phrases_found", coverage.found_count},
      {"phrases_total", coverage.found.size()},
      {"ndcg", opt(ndcg)},
      {"recall", opt(recall)},
      {"map", opt(map)},
      {"elapsed_ms", opt(elapsed_ms)},
  };
}

std::string histogram_tsv(const std::vector<HistogramRow>& rows) {
  std::ostringstream out;
  out << "phrase\tfrequency\tfound\n";
  for (const auto& r : rows) out << r.phrase << '\t' << r.frequency << '\t' << (r.found ? 1 : 0) << '\n';
  return out.str();
}

std::string ablation_tsv(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << "top_k\tnot_found\n";
  for (const auto& r : rows) out << r.top_k << '\t' << r.not_found << '\n';
  return out.str();
}

std::string pr_tsv(const std::vector<PrPoint>& points) {
  std::ostringstream out;
  out.precision(17);
  out << "rank\trecall\tprecision\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << (i + 1) << '\t' << points[i].recall << '\t' << points[i].precision << '\n';
  }
  return out.str();
}

}  // namespace sauce
