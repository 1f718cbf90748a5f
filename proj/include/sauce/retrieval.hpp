#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sauce/corpus.hpp"
#include "sauce/signature.hpp"

namespace sauce {

struct ScoredDoc {
  std::string doc_id;
  std::uint32_t score = 0;  // |query ∩ signature|
  bool operator==(const ScoredDoc&) const = default;
};

// A ranked result with a real-valued score; the common currency of the
// baseline methods and the results TSV.
struct RankedDoc {
  std::string doc_id;
  double score = 0.0;
  bool operator==(const RankedDoc&) const = default;
};

/// Union of the seeds' signatures under the index's vocabulary and params.
/// Ascending, deduplicated, and not truncated to k2.
std::vector<TermId> query_signature(std::span<const Document> seeds,
                                    const SignatureIndex& index);

/// |a ∩ b| for strictly ascending lists by two-pointer merge. When `steps`
/// is given, the number of loop iterations is added to it; it never exceeds
/// |a| + |b|.
inline std::uint32_t merge_and_score(std::span<const TermId> a, std::span<const TermId> b,
                                     std::uint64_t* steps = nullptr) {
  std::size_t i = 0, j = 0;
  std::uint32_t hits = 0;
  std::uint64_t n = 0;
  while (i < a.size() && j < b.size()) {
    ++n;
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++hits;
      ++i;
      ++j;
    }
  }
  if (steps) *steps += n;
  return hits;
}

struct ExpandStats {
  std::uint64_t docs_scanned = 0;
  std::uint64_t comparisons = 0;
  // Largest per-document comparison count seen during the scan.
  std::uint64_t max_doc_comparisons = 0;
};

/// Exact top-k by (score desc, doc_id asc) against a prepared query.
std::vector<ScoredDoc> expand_query(const SignatureIndex& index,
                                    std::span<const TermId> query, std::size_t top_k,
                                    unsigned threads = 1, ExpandStats* stats = nullptr);

/// Corpus expansion from a seed corpus. Output is identical for any thread
/// count.
std::vector<ScoredDoc> expand(const SignatureIndex& index, std::span<const Document> seeds,
                              std::size_t top_k, unsigned threads = 1,
                              ExpandStats* stats = nullptr);

// Optional mode: overlap divided by the document's signature length (0 for
// empty signatures). Same tie-break.
std::vector<RankedDoc> expand_normalized(const SignatureIndex& index,
                                         std::span<const Document> seeds,
                                         std::size_t top_k, unsigned threads = 1);

/// Sorts by (score desc, doc_id asc) and keeps the first top_k.
void rank_top_k(std::vector<RankedDoc>& docs, std::size_t top_k);

}  // namespace sauce
