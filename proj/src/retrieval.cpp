#include "sauce/retrieval.hpp"

#include <algorithm>

#include "sauce/error.hpp"
#include "sauce/parallel.hpp"

namespace sauce {
namespace {

struct Candidate {
  double score;
  std::size_t doc;
};

// Keeps the best top_k of `c` in rank order.
void keep_top(std::vector<Candidate>& c, std::size_t top_k, const SignatureIndex& index) {
  const auto sigs = index.signatures();
  auto better = [&](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return sigs[a.doc].doc_id < sigs[b.doc].doc_id;
  };
  if (c.size() > top_k) {
    std::nth_element(c.begin(), c.begin() + top_k, c.end(), better);
    c.resize(top_k);
  }
  std::sort(c.begin(), c.end(), better);
}

template <typename ScoreFn>
std::vector<Candidate> scan(const SignatureIndex& index, std::size_t top_k, unsigned threads,
                            ScoreFn&& score) {
  if (top_k < 1) throw InputError("top_k must be >= 1");
  const auto parts = partition_range(index.size(), threads);
  std::vector<std::vector<Candidate>> partial(parts.size());
  for_each_partition(parts, [&](std::size_t p, Range r) {
    auto& out = partial[p];
    out.reserve(r.end - r.begin);
    for (auto d = r.begin; d < r.end; ++d) out.push_back({score(p, d), d});
    keep_top(out, top_k, index);
  });
  std::vector<Candidate> merged;
  for (auto& part : partial) merged.insert(merged.end(), part.begin(), part.end());
  keep_top(merged, top_k, index);
  return merged;
}

}  // namespace

std::vector<TermId> query_signature(std::span<const Document> seeds,
                                    const SignatureIndex& index) {
  std::vector<TermId> q;
  for (const auto& seed : seeds) {
    const auto sig = sign_document(seed, index.vocab(), index.params());
    q.insert(q.end(), sig.term_ids.begin(), sig.term_ids.end());
  }
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  return q;
}

std::vector<ScoredDoc> expand_query(const SignatureIndex& index,
                                    std::span<const TermId> query, std::size_t top_k,
                                    unsigned threads, ExpandStats* stats) {
  const auto sigs = index.signatures();
  const auto n_parts = partition_range(index.size(), threads).size();
  std::vector<ExpandStats> part_stats(n_parts);

  auto top = scan(index, top_k, threads, [&](std::size_t p, std::size_t d) {
    std::uint64_t steps = 0;
    const auto hits = merge_and_score(query, sigs[d].term_ids, &steps);
    auto& st = part_stats[p];
    ++st.docs_scanned;
    st.comparisons += steps;
    st.max_doc_comparisons = std::max(st.max_doc_comparisons, steps);
    return static_cast<double>(hits);
  });

  if (stats) {
    for (const auto& st : part_stats) {
      stats->docs_scanned += st.docs_scanned;
      stats->comparisons += st.comparisons;
      stats->max_doc_comparisons = std::max(stats->max_doc_comparisons, st.max_doc_comparisons);
    }
  }

  std::vector<ScoredDoc> out;
  out.reserve(top.size());
  for (const auto& c : top) {
    out.push_back({sigs[c.doc].doc_id, static_cast<std::uint32_t>(c.score)});
  }
  return out;
}

std::vector<ScoredDoc> expand(const SignatureIndex& index, std::span<const Document> seeds,
                              std::size_t top_k, unsigned threads, ExpandStats* stats) {
  const auto q = query_signature(seeds, index);
  return expand_query(index, q, top_k, threads, stats);
}

std::vector<RankedDoc> expand_normalized(const SignatureIndex& index,
                                         std::span<const Document> seeds,
                                         std::size_t top_k, unsigned threads) {
  const auto q = query_signature(seeds, index);
  const auto sigs = index.signatures();
  auto top = scan(index, top_k, threads, [&](std::size_t, std::size_t d) {
    const auto& ids = sigs[d].term_ids;
    if (ids.empty()) return 0.0;
    return static_cast<double>(merge_and_score(q, ids)) / static_cast<double>(ids.size());
  });
  std::vector<RankedDoc> out;
  out.reserve(top.size());
  for (const auto& c : top) out.push_back({sigs[c.doc].doc_id, c.score});
  return out;
}

void rank_top_k(std::vector<RankedDoc>& docs, std::size_t top_k) {
  auto better = [](const RankedDoc& a, const RankedDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  };
  if (docs.size() > top_k) {
    std::nth_element(docs.begin(), docs.begin() + top_k, docs.end(), better);
    docs.resize(top_k);
  }
  std::sort(docs.begin(), docs.end(), better);
}

}  // namespace sauce
