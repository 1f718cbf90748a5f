#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sauce/corpus.hpp"

namespace sauce {

struct SignatureParams {
  std::uint32_t k1 = 1000;  // minimum document count for a term to survive
  std::uint32_t k2 = 100;   // maximum set bits per document

  void validate() const;
  bool operator==(const SignatureParams&) const = default;
};

/// A document's truncated sparse bit-vector, as strictly ascending set-bit ids.
struct Signature {
  std::string doc_id;
  std::vector<TermId> term_ids;
  bool operator==(const Signature&) const = default;
};

// Number of terms with dc >= k1.
std::size_t surviving_term_count(const Vocabulary& vocab, std::uint32_t k1);

/// The k2 rarest surviving terms of `doc`, ascending by id. Terms unknown to
/// the vocabulary are ignored.
Signature sign_document(const Document& doc, const Vocabulary& vocab,
                        const SignatureParams& params);

// Same selection over term ids already resolved against `vocab`.
std::vector<TermId> select_signature_terms(std::span<const TermId> doc_terms,
                                           const Vocabulary& vocab,
                                           const SignatureParams& params);

// Per-document signature payload as stored on disk: 4 bytes per id,
// little-endian, ascending.
std::string encode_signature_payload(const Signature& sig);

struct UpdateResult {
  std::size_t newly_stale = 0;  // existing documents added to the stale set
  std::size_t dim_before = 0;
  std::size_t dim_after = 0;
};

/// Vocabulary, parameters, and one signature per document.
///
/// Besides signatures the index keeps each document's full term-id list (the
/// forward store). Streaming updates and re-signing need it; an index loaded
/// without its forward store can be queried but not updated.
///
/// Mutation (update, resign_*) requires exclusive access. Const access is
/// safe from any number of threads.
class SignatureIndex {
 public:
  explicit SignatureIndex(SignatureParams params = {});

  const SignatureParams& params() const noexcept { return params_; }
  const Vocabulary& vocab() const noexcept { return vocab_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return signatures_.size(); }
  std::span<const Signature> signatures() const noexcept { return signatures_; }
  const Signature* find(std::string_view doc_id) const;

  bool has_forward() const noexcept { return has_forward_; }
  std::span<const TermId> forward(std::size_t doc) const { return forward_.at(doc); }
  // Ordinals of documents whose stored signature may differ from a fresh
  // signing under current statistics.
  const std::set<std::size_t>& stale() const noexcept { return stale_; }

  /// Adds one document: extends the vocabulary, bumps counts and dim, signs
  /// the new document, and records which existing signatures went stale.
  /// Throws InputError on a duplicate id.
  UpdateResult update(const Document& doc);

  // Re-signs only the stale documents. Ids are left as they are.
  void resign_stale();

  /// Renumbers the vocabulary canonically and re-signs every document. The
  /// result equals build_index over the same documents in the same order.
  void resign_all();

  bool operator==(const SignatureIndex& other) const;

 private:
  friend SignatureIndex build_index(std::span<const Document>, const SignatureParams&,
                                    unsigned);
  friend SignatureIndex decode_index(std::string_view, std::optional<std::string_view>);

  void require_forward(const char* op) const;
  void append(std::string doc_id, std::vector<TermId> terms, std::vector<TermId> sig);
  void ensure_postings();

  SignatureParams params_;
  Vocabulary vocab_;
  std::size_t dim_ = 0;
  std::vector<Signature> signatures_;
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> by_id_;
  bool has_forward_ = true;
  std::vector<std::vector<TermId>> forward_;
  std::set<std::size_t> stale_;
  // term id -> document ordinals; built on first update, not persisted.
  std::vector<std::vector<std::size_t>> postings_;
  bool postings_ready_ = false;
};

/// Counts documents, fixes dim, and signs every document. Deterministic for
/// a given input order and independent of `threads`.
SignatureIndex build_index(std::span<const Document> docs, const SignatureParams& params,
                           unsigned threads = 1);

inline UpdateResult update_index(SignatureIndex& index, const Document& doc) {
  return index.update(doc);
}
inline void resign_all(SignatureIndex& index) { index.resign_all(); }

// On-disk format, all integers little-endian:
//   "SAUC" u16 version u32 k1 u32 k2 u64 N
//   u64 |V|, then |V| x (u32 len, UTF-8 term, u64 dc) in id order
//   N x (u32 len, doc_id, u32 m, m x u32 ascending term id)
// The forward store goes to a sidecar "<path>.fwd":
//   "SAUF" u16 version u64 |V|, |V| x u64 first-seen rank,
//   u64 N, N x (u32 m, m x u32 term id), u64 s, s x u64 stale ordinal
std::string encode_index(const SignatureIndex& index);
std::string encode_forward(const SignatureIndex& index);
SignatureIndex decode_index(std::string_view index_bytes,
                            std::optional<std::string_view> forward_bytes);

std::filesystem::path forward_path(const std::filesystem::path& index_path);
void save_index(const SignatureIndex& index, const std::filesystem::path& path);
// Loads the sidecar too when it exists. Throws LoadError on malformed input.
SignatureIndex load_index(const std::filesystem::path& path);

}  // namespace sauce
