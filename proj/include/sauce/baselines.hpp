#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sauce/corpus.hpp"
#include "sauce/retrieval.hpp"

namespace sauce {

struct DenseVector {
  std::vector<double> values;
  std::size_t dim() const noexcept { return values.size(); }
  bool operator==(const DenseVector&) const = default;
};

/// Precomputed per-document vectors keyed by doc id (e.g. exported language
/// model embeddings). File format, little-endian:
///   u32 dim, then records of (u32 len, doc_id bytes, dim x f32) until EOF.
class VectorStore {
 public:
  explicit VectorStore(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const DenseVector* find(std::string_view doc_id) const;
  const DenseVector& at(std::size_t i) const { return vectors_.at(i); }

  // Throws InputError on dimension mismatch, non-finite values, or duplicate ids.
  void add(std::string doc_id, DenseVector v);

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<DenseVector> vectors_;
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index_;
};

std::string encode_vector_store(const VectorStore& store);
VectorStore decode_vector_store(std::string_view bytes);
void save_vector_store(const VectorStore& store, const std::filesystem::path& path);
VectorStore load_vector_store(const std::filesystem::path& path);

/// Σ over query terms present in the document of tf · ln(N / dc), with tf the
/// raw occurrence count in the document's token stream. dc = 0 contributes 0.
double tfidf_score(std::span<const std::string> query_terms, const Document& doc,
                   const Vocabulary& vocab);

// Seeded 64-bit term hash: FNV-1a with the seed folded into the offset
// basis, then a splitmix64 finalizer. Stable across runs and platforms.
std::uint64_t hash_term(std::string_view term, std::uint64_t seed);

inline constexpr std::uint64_t kBucketSeed = 0x5A0CE5EEDB0C4E75ULL;
inline constexpr std::uint64_t kSignSeed = 0x9E3779B97F4A7C15ULL;

/// Signed hashing trick: each token occurrence adds ±1 to bucket
/// hash_term(t, kBucketSeed) mod dim, sign taken from hash_term(t, kSignSeed).
DenseVector hash_vector(const Document& doc, std::size_t dim);

// a·b / (|a||b|). Zero vectors score 0. Throws InputError on dim mismatch.
double cosine(const DenseVector& a, const DenseVector& b);

// Arithmetic mean of the seeds' stored vectors. Throws InputError naming the
// first missing id.
DenseVector dense_query_vector(std::span<const std::string> seed_ids, const VectorStore& store);

enum class Method { kSauce, kTfidf, kHash, kDense, kRandom, kQuery };

Method parse_method(std::string_view name);
std::string_view method_name(Method m);
// Random and lexicon query sampling depend on the RNG seed.
inline bool is_randomized(Method m) { return m == Method::kRandom || m == Method::kQuery; }

// Number of phrases the lexicon baseline samples: 10% of |S|, rounded, >= 1.
std::size_t query_sample_size(std::size_t n_phrases);

struct BaselineInputs {
  std::span<const Document> corpus;
  std::span<const Document> seeds;
  // Candidate ids for random selection (and dense ranking) when no corpus
  // is given.
  std::span<const std::string> doc_ids;
  const VectorStore* vectors = nullptr;
  std::span<const std::string> phrases;  // normalized lexicon, for kQuery
  std::uint64_t rng_seed = 0;
  std::size_t hash_dim = 100;
  unsigned threads = 1;
};

/// Ranks documents with one of the comparison methods. tfidf, hash, dense and
/// query order by (score desc, doc_id asc); random returns a seeded uniform
/// sample without replacement, all scores 0. kSauce is not handled here.
/// Throws InputError when a method's inputs are missing.
std::vector<RankedDoc> baseline_expand(Method method, const BaselineInputs& in,
                                       std::size_t top_k);

}  // namespace sauce
