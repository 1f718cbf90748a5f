#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "sauce/error.hpp"
#include "sauce/retrieval.hpp"

using namespace sauce;
using sauce::testing::four_docs;

TEST_SUITE("retrieval") {

TEST_CASE("query_signature is the union of seed signatures") {
  const auto docs = four_docs();
  const auto index = build_index(docs, {2, 1});
  CHECK(query_signature(std::vector<Document>{docs[2]}, index) == std::vector<TermId>{2});
  CHECK(query_signature(std::vector<Document>{}, index).empty());
  CHECK(query_signature(std::vector<Document>{docs[0], docs[2]}, index) ==
        std::vector<TermId>{1, 2});
  // The union is not truncated to k2.
  CHECK(query_signature(docs, index).size() == 3);
}

TEST_CASE("merge_and_score") {
  const std::vector<TermId> q{1, 3, 5}, s{3, 4, 5}, empty;
  CHECK(merge_and_score(q, s) == 2);
  CHECK(merge_and_score(empty, s) == 0);
  CHECK(merge_and_score(q, empty) == 0);
  std::uint64_t steps = 0;
  merge_and_score(q, s, &steps);
  CHECK(steps <= q.size() + s.size());
}

TEST_CASE("merge_and_score matches the bitset oracle and is symmetric") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<std::size_t> len(0, 200);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = oracle::random_sorted_ids(rng, len(rng), 400);
    const auto b = oracle::random_sorted_ids(rng, len(rng), 400);
    std::uint64_t steps = 0;
    CHECK(merge_and_score(a, b, &steps) == oracle::bitset_and_popcount(a, b));
    CHECK(merge_and_score(a, b) == merge_and_score(b, a));
    CHECK(steps <= a.size() + b.size());
  }
}

TEST_CASE("expand on the fixture") {
  const auto docs = four_docs();
  const auto index = build_index(docs, {2, 1});

  const auto r = expand(index, std::vector<Document>{docs[2]}, 4);
  const std::vector<ScoredDoc> expected{{"D3", 1}, {"D1", 0}, {"D2", 0}, {"D4", 0}};
  CHECK(r == expected);

  const auto top1 = expand(index, std::vector<Document>{docs[0]}, 1);
  CHECK(top1 == std::vector<ScoredDoc>{{"D1", 1}});

  const auto none = expand(index, std::vector<Document>{make_document("q", "zzz")}, 10);
  CHECK(none == std::vector<ScoredDoc>{{"D1", 0}, {"D2", 0}, {"D3", 0}, {"D4", 0}});

  CHECK_THROWS_AS(expand(index, std::vector<Document>{}, 0), InputError);
}

TEST_CASE("brute-force oracle reproduces the fixture case") {
  const auto docs = four_docs();
  const auto r = oracle::brute_force_expand(docs, {docs[2]}, {2, 1}, 4);
  CHECK(r == std::vector<ScoredDoc>{{"D3", 1}, {"D1", 0}, {"D2", 0}, {"D4", 0}});
}

TEST_CASE("single-document corpus ranks its document first") {
  const std::vector<Document> docs{make_document("only", "x y z")};
  const auto index = build_index(docs, {1, 2});
  const auto r = expand(index, std::vector<Document>{make_document("s", "y")}, 5);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == ScoredDoc{"only", 1});
}

TEST_CASE("property: expand equals the brute-force oracle") {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<std::uint32_t> k1(1, 5), k2(1, 10);
  std::uniform_int_distribution<std::size_t> top(1, 60);
  for (int trial = 0; trial < 100; ++trial) {
    const auto docs = oracle::random_corpus(rng, 50, 30);
    const auto seeds = oracle::random_corpus(rng, 4, 30, "s");
    const SignatureParams p{k1(rng), k2(rng)};
    const auto k = top(rng);
    const auto index = build_index(docs, p);
    CHECK(expand(index, seeds, k) == oracle::brute_force_expand(docs, seeds, p, k));
  }
}

TEST_CASE("property: parallel scan equals sequential scan") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const auto docs = oracle::random_corpus(rng, 50, 30);
    const auto seeds = oracle::random_corpus(rng, 3, 30, "s");
    const auto index = build_index(docs, {2, 4});
    const auto seq = expand(index, seeds, 20, 1);
    for (unsigned t : {2u, 5u, 64u}) CHECK(expand(index, seeds, 20, t) == seq);
  }
}

TEST_CASE("property: adding a seed never lowers a score") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 30; ++trial) {
    const auto docs = oracle::random_corpus(rng, 40, 25);
    auto seeds = oracle::random_corpus(rng, 3, 25, "s");
    const auto index = build_index(docs, {2, 3});
    auto scores = [&](const std::vector<Document>& s) {
      std::map<std::string, std::uint32_t> m;
      for (const auto& r : expand(index, s, docs.size())) m[r.doc_id] = r.score;
      return m;
    };
    const auto before = scores(seeds);
    seeds.push_back(make_document("extra", docs.front().text));
    const auto after = scores(seeds);
    for (const auto& [id, s] : before) CHECK(after.at(id) >= s);
  }
}

TEST_CASE("scan cost is bounded by |q| + k2 per document") {
  std::mt19937_64 rng(61);
  const auto docs = oracle::random_corpus(rng, 50, 30);
  const auto seeds = oracle::random_corpus(rng, 5, 30, "s");
  const SignatureParams p{1, 4};
  const auto index = build_index(docs, p);
  const auto q = query_signature(seeds, index);
  ExpandStats stats;
  expand_query(index, q, 10, 3, &stats);
  CHECK(stats.docs_scanned == docs.size());
  CHECK(stats.max_doc_comparisons <= q.size() + p.k2);
}

TEST_CASE("normalized mode divides by signature length") {
  const auto docs = four_docs();
  const auto index = build_index(docs, {1, 2});
  // k1=1, k2=2: D1 -> {b,c}, D3 -> {c,e}; seed D3 -> {c,e}.
  const auto r = expand_normalized(index, std::vector<Document>{docs[2]}, 4);
  REQUIRE(r.size() == 4);
  CHECK(r[0] == RankedDoc{"D3", 1.0});
  CHECK(r[1] == RankedDoc{"D1", 0.5});
}

TEST_CASE("rank_top_k orders by score then id") {
  std::vector<RankedDoc> v{{"b", 1.0}, {"a", 1.0}, {"c", 2.0}, {"d", 0.5}};
  rank_top_k(v, 3);
  CHECK(v == std::vector<RankedDoc>{{"c", 2.0}, {"a", 1.0}, {"b", 1.0}});
}

}  // TEST_SUITE
