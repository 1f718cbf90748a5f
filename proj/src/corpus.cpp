#include "sauce/corpus.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "sauce/error.hpp"
#include "sauce/parallel.hpp"

namespace sauce {
namespace {

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t n = 0;
  U8_APPEND_UNSAFE(buf, n, c);
  out.append(buf, static_cast<std::size_t>(n));
}

// Calls visit(code_point) for each decoded code point; -1 for invalid bytes.
template <typename Visit>
void for_each_code_point(std::string_view text, Visit&& visit) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto len = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    visit(c);
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for_each_code_point(text, [&](UChar32 c) {
    if (c >= 0 && u_isalnum(c)) {
      append_utf8(current, u_tolower(c));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  });
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for_each_code_point(text, [&](UChar32 c) {
    if (c < 0) return;
    if (u_isUWhiteSpace(c)) {
      pending_space = !out.empty();
      return;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    append_utf8(out, u_tolower(c));
  });
  return out;
}

Document make_document(std::string id, std::string text) {
  Document doc{std::move(id), std::move(text), {}};
  std::unordered_set<std::string> seen;
  for (auto& t : tokenize(doc.text)) {
    if (seen.insert(t).second) doc.terms.push_back(std::move(t));
  }
  return doc;
}

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(Document&&)>& sink) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());

  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    const auto where = path.string() + ":" + std::to_string(line_no);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(where + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("text") ||
        !obj["id"].is_string() || !obj["text"].is_string()) {
      throw InputError(where + ": expected object with string fields \"id\" and \"text\"");
    }
    auto id = obj["id"].get<std::string>();
    if (!ids.insert(id).second) {
      throw InputError(where + ": duplicate document id \"" + id + "\"");
    }
    sink(make_document(std::move(id), obj["text"].get<std::string>()));
  }
}

std::vector<Document> read_jsonl(const std::filesystem::path& path) {
  std::vector<Document> docs;
  for_each_jsonl(path, [&](Document&& d) { docs.push_back(std::move(d)); });
  return docs;
}

void PartialCounts::add(const Document& doc, std::uint64_t doc_ordinal) {
  ++n_docs;
  for (std::uint32_t pos = 0; pos < doc.terms.size(); ++pos) {
    auto [it, inserted] = terms.try_emplace(doc.terms[pos]);
    if (inserted) it->second.first = FirstSeen{doc_ordinal, pos};
    ++it->second.dc;
  }
}

PartialCounts count_partition(std::span<const Document> docs,
                              std::uint64_t first_ordinal) {
  PartialCounts counts;
  for (std::size_t i = 0; i < docs.size(); ++i) counts.add(docs[i], first_ordinal + i);
  return counts;
}

PartialCounts merge_counts(PartialCounts a, const PartialCounts& b) {
  a.n_docs += b.n_docs;
  for (const auto& [term, entry] : b.terms) {
    auto [it, inserted] = a.terms.try_emplace(term, entry);
    if (!inserted) {
      it->second.dc += entry.dc;
      it->second.first = std::min(it->second.first, entry.first);
    }
  }
  return a;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint64_t> dc,
                       std::vector<std::uint64_t> first_seen, std::uint64_t n_docs)
    : terms_(std::move(terms)),
      dc_(std::move(dc)),
      first_seen_(std::move(first_seen)),
      n_docs_(n_docs) {
  if (dc_.size() != terms_.size() || first_seen_.size() != terms_.size()) {
    throw InputError("vocabulary arrays differ in length");
  }
  for (auto c : dc_) {
    if (c > n_docs_) throw InputError("document count exceeds corpus size");
  }
  rebuild_lookup();
  if (ids_.size() != terms_.size()) throw InputError("duplicate vocabulary term");
}

Vocabulary Vocabulary::from_counts(const PartialCounts& counts) {
  std::vector<const std::pair<const std::string, PartialCounts::Entry>*> entries;
  entries.reserve(counts.terms.size());
  for (const auto& kv : counts.terms) entries.push_back(&kv);

  // First-seen ranks.
  std::sort(entries.begin(), entries.end(),
            [](auto* a, auto* b) { return a->second.first < b->second.first; });
  std::vector<std::uint64_t> rank(entries.size());
  std::iota(rank.begin(), rank.end(), 0);

  // Canonical id order: dc descending, then first-seen.
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return entries[a]->second.dc > entries[b]->second.dc;
  });

  Vocabulary v;
  v.n_docs_ = counts.n_docs;
  v.terms_.reserve(order.size());
  v.dc_.reserve(order.size());
  v.first_seen_.reserve(order.size());
  for (auto i : order) {
    v.terms_.push_back(entries[i]->first);
    v.dc_.push_back(entries[i]->second.dc);
    v.first_seen_.push_back(rank[i]);
  }
  v.rebuild_lookup();
  return v;
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
  auto it = ids_.find(term);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

TermId Vocabulary::intern(std::string_view term) {
  if (auto id = find(term)) return *id;
  const auto id = static_cast<TermId>(terms_.size());
  terms_.emplace_back(term);
  dc_.push_back(0);
  first_seen_.push_back(terms_.size() - 1);
  ids_.emplace(terms_.back(), id);
  return id;
}

bool Vocabulary::is_canonical() const {
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    if (dc_[i - 1] < dc_[i]) return false;
    if (dc_[i - 1] == dc_[i] && first_seen_[i - 1] > first_seen_[i]) return false;
  }
  return true;
}

std::vector<TermId> Vocabulary::canonicalize() {
  std::vector<TermId> order(terms_.size());
  std::iota(order.begin(), order.end(), TermId{0});
  std::sort(order.begin(), order.end(), [&](TermId a, TermId b) {
    if (dc_[a] != dc_[b]) return dc_[a] > dc_[b];
    return first_seen_[a] < first_seen_[b];
  });

  std::vector<TermId> remap(terms_.size());
  std::vector<std::string> terms(terms_.size());
  std::vector<std::uint64_t> dc(terms_.size()), first(terms_.size());
  for (TermId new_id = 0; new_id < order.size(); ++new_id) {
    const auto old_id = order[new_id];
    remap[old_id] = new_id;
    terms[new_id] = std::move(terms_[old_id]);
    dc[new_id] = dc_[old_id];
    first[new_id] = first_seen_[old_id];
  }
  terms_ = std::move(terms);
  dc_ = std::move(dc);
  first_seen_ = std::move(first);
  rebuild_lookup();
  return remap;
}

void Vocabulary::rebuild_lookup() {
  ids_.clear();
  ids_.reserve(terms_.size());
  for (TermId i = 0; i < terms_.size(); ++i) ids_.emplace(terms_[i], i);
}

Vocabulary count_documents(std::span<const Document> docs, unsigned threads) {
  const auto parts = partition_range(docs.size(), threads);
  std::vector<PartialCounts> partial(parts.size());
  for_each_partition(parts, [&](std::size_t p, Range r) {
    partial[p] = count_partition(docs.subspan(r.begin, r.end - r.begin), r.begin);
  });
  PartialCounts total;
  for (const auto& pc : partial) total = merge_counts(std::move(total), pc);
  return Vocabulary::from_counts(total);
}

}  // namespace sauce
