#include "sauce/signature.hpp"

#include <algorithm>
#include <numeric>

#include "binary_io.hpp"
#include "sauce/error.hpp"
#include "sauce/parallel.hpp"

namespace sauce {
namespace {

constexpr std::string_view kIndexMagic = "SAUC";
constexpr std::string_view kForwardMagic = "SAUF";
constexpr std::uint16_t kFormatVersion = 1;

void check_header(detail::ByteReader& in, std::string_view magic, const char* what) {
  if (in.remaining() < magic.size() || in.get_raw(magic.size(), what) != magic) {
    throw LoadError(LoadError::Kind::kBadMagic, 0, std::string("bad magic in ") + what);
  }
  const auto version = in.get<std::uint16_t>("format version");
  if (version != kFormatVersion) {
    throw LoadError(LoadError::Kind::kUnsupportedVersion, magic.size(),
                    "unsupported format version " + std::to_string(version));
  }
}

[[noreturn]] void corrupt(const detail::ByteReader& in, const std::string& what) {
  throw LoadError(LoadError::Kind::kCorrupt, in.offset(), what);
}

// A declared count that cannot fit in the remaining bytes.
[[noreturn]] void too_short(const detail::ByteReader& in, const std::string& what) {
  throw LoadError(LoadError::Kind::kTruncated, in.offset(), what);
}

}  // namespace

void SignatureParams::validate() const {
  if (k1 < 1) throw InputError("k1 must be >= 1");
  if (k2 < 1) throw InputError("k2 must be >= 1");
}

std::size_t surviving_term_count(const Vocabulary& vocab, std::uint32_t k1) {
  return static_cast<std::size_t>(
      std::count_if(vocab.dcs().begin(), vocab.dcs().end(),
                    [k1](std::uint64_t dc) { return dc >= k1; }));
}

std::vector<TermId> select_signature_terms(std::span<const TermId> doc_terms,
                                           const Vocabulary& vocab,
                                           const SignatureParams& params) {
  std::vector<TermId> kept;
  kept.reserve(doc_terms.size());
  for (auto id : doc_terms) {
    if (vocab.dc(id) >= params.k1) kept.push_back(id);
  }
  if (kept.size() > params.k2) {
    auto rarer = [&](TermId a, TermId b) { return vocab.rarer(a, b); };
    std::nth_element(kept.begin(), kept.begin() + params.k2, kept.end(), rarer);
    kept.resize(params.k2);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

Signature sign_document(const Document& doc, const Vocabulary& vocab,
                        const SignatureParams& params) {
  std::vector<TermId> ids;
  ids.reserve(doc.terms.size());
  for (const auto& t : doc.terms) {
    if (auto id = vocab.find(t)) ids.push_back(*id);
  }
  return {doc.id, select_signature_terms(ids, vocab, params)};
}

std::string encode_signature_payload(const Signature& sig) {
  detail::ByteWriter out;
  for (auto id : sig.term_ids) out.put<std::uint32_t>(id);
  return out.bytes();
}

SignatureIndex::SignatureIndex(SignatureParams params) : params_(params) {
  params_.validate();
}

const Signature* SignatureIndex::find(std::string_view doc_id) const {
  auto it = by_id_.find(doc_id);
  return it == by_id_.end() ? nullptr : &signatures_[it->second];
}

void SignatureIndex::require_forward(const char* op) const {
  if (!has_forward_) {
    throw InputError(std::string(op) + " needs the forward store (" +
                     "index was loaded without its .fwd sidecar)");
  }
}

void SignatureIndex::append(std::string doc_id, std::vector<TermId> terms,
                            std::vector<TermId> sig) {
  auto [it, inserted] = by_id_.try_emplace(doc_id, signatures_.size());
  if (!inserted) throw InputError("duplicate document id \"" + doc_id + "\"");
  signatures_.push_back({std::move(doc_id), std::move(sig)});
  forward_.push_back(std::move(terms));
}

void SignatureIndex::ensure_postings() {
  if (postings_ready_) return;
  postings_.assign(vocab_.size(), {});
  for (std::size_t d = 0; d < forward_.size(); ++d) {
    for (auto id : forward_[d]) postings_[id].push_back(d);
  }
  postings_ready_ = true;
}

UpdateResult SignatureIndex::update(const Document& doc) {
  require_forward("update");
  if (by_id_.contains(doc.id)) {
    throw InputError("duplicate document id \"" + doc.id + "\"");
  }
  ensure_postings();

  UpdateResult result;
  result.dim_before = dim_;

  std::vector<TermId> ids;
  std::vector<TermId> crossed;  // reached k1 with this document
  std::vector<TermId> shifted;  // already surviving, count changed
  ids.reserve(doc.terms.size());
  for (const auto& t : doc.terms) {
    const auto id = vocab_.intern(t);
    vocab_.increment(id);
    ids.push_back(id);
    if (vocab_.dc(id) == params_.k1) {
      ++dim_;
      crossed.push_back(id);
    } else if (vocab_.dc(id) > params_.k1) {
      shifted.push_back(id);
    }
  }
  vocab_.add_document();
  postings_.resize(vocab_.size());

  auto mark = [&](std::size_t d) {
    if (stale_.insert(d).second) ++result.newly_stale;
  };
  for (auto id : crossed) {
    for (auto d : postings_[id]) mark(d);
  }
  // A count change can only reorder a selection that was truncated.
  for (auto id : shifted) {
    for (auto d : postings_[id]) {
      if (stale_.contains(d)) continue;
      const auto& terms = forward_[d];
      const auto surviving = std::count_if(terms.begin(), terms.end(), [&](TermId t) {
        return vocab_.dc(t) >= params_.k1;
      });
      if (static_cast<std::size_t>(surviving) > params_.k2) mark(d);
    }
  }

  std::sort(ids.begin(), ids.end());
  const auto ordinal = signatures_.size();
  for (auto id : ids) postings_[id].push_back(ordinal);
  auto sig = select_signature_terms(ids, vocab_, params_);
  append(doc.id, std::move(ids), std::move(sig));

  result.dim_after = dim_;
  return result;
}

void SignatureIndex::resign_stale() {
  require_forward("resign");
  for (auto d : stale_) {
    signatures_[d].term_ids = select_signature_terms(forward_[d], vocab_, params_);
  }
  stale_.clear();
}

void SignatureIndex::resign_all() {
  require_forward("resign");
  const auto remap = vocab_.canonicalize();
  for (auto& terms : forward_) {
    for (auto& id : terms) id = remap[id];
    std::sort(terms.begin(), terms.end());
  }
  for (std::size_t d = 0; d < signatures_.size(); ++d) {
    signatures_[d].term_ids = select_signature_terms(forward_[d], vocab_, params_);
  }
  dim_ = surviving_term_count(vocab_, params_.k1);
  stale_.clear();
  postings_.clear();
  postings_ready_ = false;
}

bool SignatureIndex::operator==(const SignatureIndex& other) const {
  return params_ == other.params_ && dim_ == other.dim_ && vocab_ == other.vocab_ &&
         signatures_ == other.signatures_ && has_forward_ == other.has_forward_ &&
         forward_ == other.forward_ && stale_ == other.stale_;
}

SignatureIndex build_index(std::span<const Document> docs, const SignatureParams& params,
                           unsigned threads) {
  SignatureIndex index(params);
  index.vocab_ = count_documents(docs, threads);
  index.dim_ = surviving_term_count(index.vocab_, params.k1);

  std::vector<std::vector<TermId>> terms(docs.size());
  std::vector<std::vector<TermId>> sigs(docs.size());
  const auto& vocab = index.vocab_;
  for_each_partition(partition_range(docs.size(), threads), [&](std::size_t, Range r) {
    for (auto i = r.begin; i < r.end; ++i) {
      auto& ids = terms[i];
      ids.reserve(docs[i].terms.size());
      for (const auto& t : docs[i].terms) ids.push_back(*vocab.find(t));
      std::sort(ids.begin(), ids.end());
      sigs[i] = select_signature_terms(ids, vocab, params);
    }
  });

  index.signatures_.reserve(docs.size());
  index.forward_.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    index.append(docs[i].id, std::move(terms[i]), std::move(sigs[i]));
  }
  return index;
}

std::string encode_index(const SignatureIndex& index) {
  detail::ByteWriter out;
  out.put_raw(kIndexMagic);
  out.put(kFormatVersion);
  out.put(index.params().k1);
  out.put(index.params().k2);
  const auto& vocab = index.vocab();
  out.put<std::uint64_t>(vocab.n_docs());
  out.put<std::uint64_t>(vocab.size());
  for (TermId id = 0; id < vocab.size(); ++id) {
    out.put_string(vocab.term(id));
    out.put<std::uint64_t>(vocab.dc(id));
  }
  for (const auto& sig : index.signatures()) {
    out.put_string(sig.doc_id);
    out.put(static_cast<std::uint32_t>(sig.term_ids.size()));
    out.put_raw(encode_signature_payload(sig));
  }
  return out.bytes();
}

std::string encode_forward(const SignatureIndex& index) {
  detail::ByteWriter out;
  out.put_raw(kForwardMagic);
  out.put(kFormatVersion);
  const auto& ranks = index.vocab().first_seen_ranks();
  out.put<std::uint64_t>(ranks.size());
  for (auto r : ranks) out.put<std::uint64_t>(r);
  out.put<std::uint64_t>(index.size());
  for (std::size_t d = 0; d < index.size(); ++d) {
    const auto terms = index.forward(d);
    out.put(static_cast<std::uint32_t>(terms.size()));
    for (auto id : terms) out.put<std::uint32_t>(id);
  }
  out.put<std::uint64_t>(index.stale().size());
  for (auto d : index.stale()) out.put<std::uint64_t>(d);
  return out.bytes();
}

SignatureIndex decode_index(std::string_view index_bytes,
                            std::optional<std::string_view> forward_bytes) {
  detail::ByteReader in(index_bytes);
  check_header(in, kIndexMagic, "index");
  SignatureParams params;
  params.k1 = in.get<std::uint32_t>("k1");
  params.k2 = in.get<std::uint32_t>("k2");
  if (params.k1 < 1 || params.k2 < 1) corrupt(in, "k1/k2 must be positive");
  const auto n_docs = in.get<std::uint64_t>("document count");
  const auto n_terms = in.get<std::uint64_t>("vocabulary size");
  // Each term needs at least 12 bytes; reject absurd sizes before allocating.
  if (n_terms > in.remaining() / 12) too_short(in, "vocabulary size exceeds file");

  std::vector<std::string> terms;
  std::vector<std::uint64_t> dcs;
  terms.reserve(n_terms);
  dcs.reserve(n_terms);
  for (std::uint64_t i = 0; i < n_terms; ++i) {
    terms.push_back(in.get_string("term"));
    dcs.push_back(in.get<std::uint64_t>("document count"));
    if (dcs.back() > n_docs) corrupt(in, "term document count exceeds N");
  }

  SignatureIndex index(params);
  std::vector<std::uint64_t> first_seen(n_terms);
  std::iota(first_seen.begin(), first_seen.end(), 0);

  std::vector<std::vector<TermId>> forward;
  std::set<std::size_t> stale;
  if (forward_bytes) {
    detail::ByteReader fw(*forward_bytes);
    check_header(fw, kForwardMagic, "forward store");
    if (fw.get<std::uint64_t>("vocabulary size") != n_terms) {
      corrupt(fw, "forward store vocabulary size mismatch");
    }
    for (auto& r : first_seen) r = fw.get<std::uint64_t>("first-seen rank");
    if (fw.get<std::uint64_t>("document count") != n_docs) {
      corrupt(fw, "forward store document count mismatch");
    }
    if (n_docs > fw.remaining() / 4) too_short(fw, "document count exceeds file");
    forward.resize(n_docs);
    for (auto& doc_terms : forward) {
      const auto m = fw.get<std::uint32_t>("term count");
      if (m > fw.remaining() / 4) too_short(fw, "term count exceeds file");
      doc_terms.resize(m);
      for (std::uint32_t j = 0; j < m; ++j) {
        doc_terms[j] = fw.get<std::uint32_t>("term id");
        if (doc_terms[j] >= n_terms || (j > 0 && doc_terms[j] <= doc_terms[j - 1])) {
          corrupt(fw, "forward term ids must be ascending and in range");
        }
      }
    }
    const auto n_stale = fw.get<std::uint64_t>("stale count");
    for (std::uint64_t i = 0; i < n_stale; ++i) {
      const auto d = fw.get<std::uint64_t>("stale ordinal");
      if (d >= n_docs) corrupt(fw, "stale ordinal out of range");
      stale.insert(static_cast<std::size_t>(d));
    }
    if (!fw.at_end()) corrupt(fw, "trailing bytes in forward store");
    std::vector<bool> seen(n_terms, false);
    for (auto r : first_seen) {
      if (r >= n_terms || seen[r]) corrupt(fw, "first-seen ranks must be a permutation");
      seen[r] = true;
    }
  }

  try {
    index.vocab_ = Vocabulary(std::move(terms), std::move(dcs), std::move(first_seen), n_docs);
  } catch (const InputError& e) {
    corrupt(in, e.what());
  }
  index.dim_ = surviving_term_count(index.vocab_, params.k1);

  if (n_docs > in.remaining() / 8) too_short(in, "document count exceeds file");
  index.signatures_.reserve(n_docs);
  for (std::uint64_t d = 0; d < n_docs; ++d) {
    auto doc_id = in.get_string("document id");
    const auto m = in.get<std::uint32_t>("signature length");
    if (m > params.k2) corrupt(in, "signature longer than k2");
    std::vector<TermId> ids(m);
    for (std::uint32_t j = 0; j < m; ++j) {
      ids[j] = in.get<std::uint32_t>("term id");
      if (ids[j] >= n_terms || (j > 0 && ids[j] <= ids[j - 1])) {
        corrupt(in, "signature ids must be ascending and in range");
      }
      if (index.vocab_.dc(ids[j]) < params.k1) corrupt(in, "signature holds a dropped term");
    }
    if (index.by_id_.contains(doc_id)) corrupt(in, "duplicate document id");
    index.by_id_.emplace(doc_id, index.signatures_.size());
    index.signatures_.push_back({std::move(doc_id), std::move(ids)});
  }
  if (!in.at_end()) corrupt(in, "trailing bytes in index");

  index.has_forward_ = forward_bytes.has_value();
  index.forward_ = std::move(forward);
  index.stale_ = std::move(stale);
  return index;
}

std::filesystem::path forward_path(const std::filesystem::path& index_path) {
  auto p = index_path;
  p += ".fwd";
  return p;
}

void save_index(const SignatureIndex& index, const std::filesystem::path& path) {
  detail::write_file(path, encode_index(index));
  if (index.has_forward()) detail::write_file(forward_path(path), encode_forward(index));
}

SignatureIndex load_index(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  const auto fwd = forward_path(path);
  if (std::filesystem::exists(fwd)) {
    const auto fw_bytes = detail::read_file(fwd);
    return decode_index(bytes, fw_bytes);
  }
  return decode_index(bytes, std::nullopt);
}

}  // namespace sauce
