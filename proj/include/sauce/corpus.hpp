#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sauce {

using TermId = std::uint32_t;

// Lowercased maximal runs of Unicode alphanumerics. Invalid UTF-8 bytes act
// as separators.
std::vector<std::string> tokenize(std::string_view text);

// Lowercase, collapse whitespace runs to one space, trim. Phrase matching
// during evaluation is substring search over this form.
std::string normalize_text(std::string_view text);

struct Document {
  std::string id;
  std::string text;
  // Deduplicated tokens in first-occurrence order.
  std::vector<std::string> terms;
};

Document make_document(std::string id, std::string text);

/// Streams {"id","text"} objects from a JSONL file, one Document per line.
/// Blank lines are skipped. Throws InputError naming the line for malformed
/// input and naming the id for duplicates.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(Document&&)>& sink);
std::vector<Document> read_jsonl(const std::filesystem::path& path);

/// Where a term was first encountered: document ordinal in the stream, then
/// position among that document's deduplicated terms.
struct FirstSeen {
  std::uint64_t doc = 0;
  std::uint32_t pos = 0;
  auto operator<=>(const FirstSeen&) const = default;
};

/// Document counts over one partition of the corpus.
struct PartialCounts {
  struct Entry {
    std::uint64_t dc = 0;
    FirstSeen first;
    bool operator==(const Entry&) const = default;
  };
  std::unordered_map<std::string, Entry> terms;
  std::uint64_t n_docs = 0;

  void add(const Document& doc, std::uint64_t doc_ordinal);
  bool operator==(const PartialCounts&) const = default;
};

PartialCounts count_partition(std::span<const Document> docs,
                              std::uint64_t first_ordinal);

// Sums counts, keeps the earliest first-seen position. Associative and
// commutative for partitions that are disjoint in documents.
PartialCounts merge_counts(PartialCounts a, const PartialCounts& b);

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

/// Term <-> id mapping with per-term document counts.
///
/// A canonical vocabulary numbers terms by decreasing document count, ties
/// broken by first-seen order. Streaming updates append unseen terms at the
/// end, which breaks canonical order until canonicalize() is called.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint64_t> dc,
             std::vector<std::uint64_t> first_seen, std::uint64_t n_docs);

  static Vocabulary from_counts(const PartialCounts& counts);

  std::size_t size() const noexcept { return terms_.size(); }
  std::uint64_t n_docs() const noexcept { return n_docs_; }
  const std::string& term(TermId id) const { return terms_.at(id); }
  std::uint64_t dc(TermId id) const { return dc_[id]; }
  // Rank of the term in first-seen order; a permutation of 0..size()-1.
  std::uint64_t first_seen(TermId id) const { return first_seen_[id]; }
  std::optional<TermId> find(std::string_view term) const;

  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::uint64_t>& dcs() const noexcept { return dc_; }
  const std::vector<std::uint64_t>& first_seen_ranks() const noexcept {
    return first_seen_;
  }

  // Rarity order used for k2 truncation: lower document count first, then
  // earlier first-seen. In a canonical vocabulary the tie rule is the same as
  // lower id first.
  bool rarer(TermId a, TermId b) const noexcept {
    if (dc_[a] != dc_[b]) return dc_[a] < dc_[b];
    return first_seen_[a] < first_seen_[b];
  }

  TermId intern(std::string_view term);
  void increment(TermId id) { ++dc_[id]; }
  void add_document() { ++n_docs_; }

  bool is_canonical() const;
  // Renumbers into canonical order. Returns old id -> new id.
  std::vector<TermId> canonicalize();

  bool operator==(const Vocabulary& other) const {
    return n_docs_ == other.n_docs_ && terms_ == other.terms_ &&
           dc_ == other.dc_ && first_seen_ == other.first_seen_;
  }

 private:
  void rebuild_lookup();

  std::vector<std::string> terms_;
  std::vector<std::uint64_t> dc_;
  std::vector<std::uint64_t> first_seen_;
  std::unordered_map<std::string, TermId, StringHash, std::equal_to<>> ids_;
  std::uint64_t n_docs_ = 0;
};

/// Counts document frequencies, in parallel over contiguous partitions when
/// threads > 1. The result does not depend on the thread count.
Vocabulary count_documents(std::span<const Document> docs, unsigned threads = 1);

}  // namespace sauce
