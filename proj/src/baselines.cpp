#include "sauce/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "binary_io.hpp"
#include "sauce/error.hpp"
#include "sauce/parallel.hpp"

namespace sauce {

const DenseVector* VectorStore::find(std::string_view doc_id) const {
  auto it = index_.find(doc_id);
  return it == index_.end() ? nullptr : &vectors_[it->second];
}

void VectorStore::add(std::string doc_id, DenseVector v) {
  if (v.dim() != dim_) {
    throw InputError("vector for \"" + doc_id + "\" has dim " + std::to_string(v.dim()) +
                     ", store has " + std::to_string(dim_));
  }
  for (double x : v.values) {
    if (!std::isfinite(x)) throw InputError("non-finite value in vector \"" + doc_id + "\"");
  }
  if (!index_.try_emplace(doc_id, ids_.size()).second) {
    throw InputError("duplicate vector id \"" + doc_id + "\"");
  }
  ids_.push_back(std::move(doc_id));
  vectors_.push_back(std::move(v));
}

std::string encode_vector_store(const VectorStore& store) {
  detail::ByteWriter out;
  out.put(static_cast<std::uint32_t>(store.dim()));
  for (std::size_t i = 0; i < store.size(); ++i) {
    out.put_string(store.ids()[i]);
    for (double x : store.at(i).values) out.put_f32(static_cast<float>(x));
  }
  return out.bytes();
}

VectorStore decode_vector_store(std::string_view bytes) {
  detail::ByteReader in(bytes);
  const auto dim = in.get<std::uint32_t>("vector dimension");
  if (dim == 0) throw LoadError(LoadError::Kind::kCorrupt, 0, "vector dimension must be >= 1");
  VectorStore store(dim);
  while (!in.at_end()) {
    const auto at = in.offset();
    auto id = in.get_string("vector id");
    DenseVector v;
    v.values.resize(dim);
    for (auto& x : v.values) x = in.get_f32("vector value");
    try {
      store.add(std::move(id), std::move(v));
    } catch (const InputError& e) {
      throw LoadError(LoadError::Kind::kCorrupt, at, e.what());
    }
  }
  return store;
}

void save_vector_store(const VectorStore& store, const std::filesystem::path& path) {
  detail::write_file(path, encode_vector_store(store));
}

VectorStore load_vector_store(const std::filesystem::path& path) {
  return decode_vector_store(detail::read_file(path));
}

double tfidf_score(std::span<const std::string> query_terms, const Document& doc,
                   const Vocabulary& vocab) {
  if (vocab.n_docs() == 0) return 0.0;
  std::unordered_map<std::string, std::uint32_t> tf;
  for (auto& t : tokenize(doc.text)) ++tf[std::move(t)];

  const auto n = static_cast<double>(vocab.n_docs());
  std::unordered_set<std::string_view> seen;
  double score = 0.0;
  for (const auto& q : query_terms) {
    if (!seen.insert(q).second) continue;
    auto it = tf.find(q);
    if (it == tf.end()) continue;
    const auto id = vocab.find(q);
    if (!id || vocab.dc(*id) == 0) continue;
    score += it->second * std::log(n / static_cast<double>(vocab.dc(*id)));
  }
  return score;
}

std::uint64_t hash_term(std::string_view term, std::uint64_t seed) {
  std::uint64_t h = 0xCBF29CE484222325ULL ^ seed;
  for (unsigned char c : term) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  h ^= h >> 30;
  h *= 0xBF58476D1CE4E5B9ULL;
  h ^= h >> 27;
  h *= 0x94D049BB133111EBULL;
  h ^= h >> 31;
  return h;
}

DenseVector hash_vector(const Document& doc, std::size_t dim) {
  if (dim < 1) throw InputError("hash dimension must be >= 1");
  DenseVector v;
  v.values.assign(dim, 0.0);
  for (const auto& t : tokenize(doc.text)) {
    const auto bucket = hash_term(t, kBucketSeed) % dim;
    v.values[bucket] += (hash_term(t, kSignSeed) & 1) ? 1.0 : -1.0;
  }
  return v;
}

double cosine(const DenseVector& a, const DenseVector& b) {
  if (a.dim() != b.dim()) {
    throw InputError("cosine of vectors with different dimensions");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

DenseVector dense_query_vector(std::span<const std::string> seed_ids, const VectorStore& store) {
  DenseVector mean;
  mean.values.assign(store.dim(), 0.0);
  for (const auto& id : seed_ids) {
    const auto* v = store.find(id);
    if (!v) throw InputError("seed \"" + id + "\" has no stored vector");
    for (std::size_t i = 0; i < mean.dim(); ++i) mean.values[i] += v->values[i];
  }
  if (!seed_ids.empty()) {
    for (auto& x : mean.values) x /= static_cast<double>(seed_ids.size());
  }
  return mean;
}

Method parse_method(std::string_view name) {
  if (name == "sauce") return Method::kSauce;
  if (name == "tfidf") return Method::kTfidf;
  if (name == "hash") return Method::kHash;
  if (name == "dense") return Method::kDense;
  if (name == "random") return Method::kRandom;
  if (name == "query") return Method::kQuery;
  throw InputError("unknown method \"" + std::string(name) + "\"");
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kSauce: return "sauce";
    case Method::kTfidf: return "tfidf";
    case Method::kHash: return "hash";
    case Method::kDense: return "dense";
    case Method::kRandom: return "random";
    case Method::kQuery: return "query";
  }
  return "?";
}

std::size_t query_sample_size(std::size_t n_phrases) {
  const auto n = static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(n_phrases)));
  return std::clamp<std::size_t>(n, 1, std::max<std::size_t>(n_phrases, 1));
}

namespace {

template <typename Score>
std::vector<RankedDoc> score_all(std::span<const std::string> ids, unsigned threads,
                                 std::size_t top_k, Score&& score) {
  std::vector<RankedDoc> out(ids.size());
  for_each_partition(partition_range(ids.size(), threads), [&](std::size_t, Range r) {
    for (auto i = r.begin; i < r.end; ++i) out[i] = {ids[i], score(i)};
  });
  rank_top_k(out, top_k);
  return out;
}

std::vector<std::string> corpus_ids(std::span<const Document> corpus) {
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const auto& d : corpus) ids.push_back(d.id);
  return ids;
}

std::vector<RankedDoc> run_tfidf(const BaselineInputs& in, std::size_t top_k) {
  const auto vocab = count_documents(in.corpus, in.threads);
  std::vector<std::string> query;
  for (const auto& s : in.seeds) query.insert(query.end(), s.terms.begin(), s.terms.end());
  std::sort(query.begin(), query.end());
  query.erase(std::unique(query.begin(), query.end()), query.end());
  const auto ids = corpus_ids(in.corpus);
  return score_all(ids, in.threads, top_k,
                   [&](std::size_t i) { return tfidf_score(query, in.corpus[i], vocab); });
}

std::vector<RankedDoc> run_hash(const BaselineInputs& in, std::size_t top_k) {
  // Mean of per-seed averaged vectors.
  DenseVector query;
  query.values.assign(in.hash_dim, 0.0);
  for (const auto& s : in.seeds) {
    const auto v = hash_vector(s, in.hash_dim);
    const auto tokens = static_cast<double>(tokenize(s.text).size());
    if (tokens == 0) continue;
    for (std::size_t i = 0; i < in.hash_dim; ++i) query.values[i] += v.values[i] / tokens;
  }
  if (!in.seeds.empty()) {
    for (auto& x : query.values) x /= static_cast<double>(in.seeds.size());
  }
  const auto ids = corpus_ids(in.corpus);
  return score_all(ids, in.threads, top_k, [&](std::size_t i) {
    return cosine(query, hash_vector(in.corpus[i], in.hash_dim));
  });
}

std::vector<RankedDoc> run_dense(const BaselineInputs& in, std::size_t top_k) {
  if (!in.vectors) throw InputError("method dense requires a vector store");
  const auto& store = *in.vectors;
  std::vector<std::string> seed_ids;
  for (const auto& s : in.seeds) seed_ids.push_back(s.id);
  const auto query = dense_query_vector(seed_ids, store);

  std::vector<std::string> ids;
  if (!in.corpus.empty()) {
    ids = corpus_ids(in.corpus);
  } else if (!in.doc_ids.empty()) {
    ids.assign(in.doc_ids.begin(), in.doc_ids.end());
  } else {
    ids = store.ids();
  }
  for (const auto& id : ids) {
    if (!store.find(id)) throw InputError("document \"" + id + "\" has no stored vector");
  }
  return score_all(ids, in.threads, top_k,
                   [&](std::size_t i) { return cosine(query, *store.find(ids[i])); });
}

std::vector<RankedDoc> run_random(const BaselineInputs& in, std::size_t top_k) {
  std::vector<std::string> ids = in.corpus.empty()
                                     ? std::vector<std::string>(in.doc_ids.begin(), in.doc_ids.end())
                                     : corpus_ids(in.corpus);
  std::vector<std::string> picked;
  picked.reserve(std::min(top_k, ids.size()));
  std::mt19937_64 rng(in.rng_seed);
  std::sample(ids.begin(), ids.end(), std::back_inserter(picked), top_k, rng);
  std::vector<RankedDoc> out;
  out.reserve(picked.size());
  for (auto& id : picked) out.push_back({std::move(id), 0.0});
  return out;
}

std::vector<RankedDoc> run_query(const BaselineInputs& in, std::size_t top_k) {
  if (in.phrases.empty()) throw InputError("method query requires a phrase set");
  std::vector<std::string> sample;
  std::mt19937_64 rng(in.rng_seed);
  std::sample(in.phrases.begin(), in.phrases.end(), std::back_inserter(sample),
              query_sample_size(in.phrases.size()), rng);
  for (auto& p : sample) p = normalize_text(p);

  const auto ids = corpus_ids(in.corpus);
  return score_all(ids, in.threads, top_k, [&](std::size_t i) {
    const auto text = normalize_text(in.corpus[i].text);
    double hits = 0;
    for (const auto& p : sample) {
      if (!p.empty() && text.find(p) != std::string::npos) hits += 1;
    }
    return hits;
  });
}

}  // namespace

std::vector<RankedDoc> baseline_expand(Method method, const BaselineInputs& in,
                                       std::size_t top_k) {
  if (top_k < 1) throw InputError("top_k must be >= 1");
  switch (method) {
    case Method::kTfidf: return run_tfidf(in, top_k);
    case Method::kHash: return run_hash(in, top_k);
    case Method::kDense: return run_dense(in, top_k);
    case Method::kRandom: return run_random(in, top_k);
    case Method::kQuery: return run_query(in, top_k);
    case Method::kSauce: break;
  }
  throw InputError("baseline_expand does not handle method sauce; use expand()");
}

}  // namespace sauce
