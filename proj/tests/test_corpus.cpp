#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "sauce/corpus.hpp"
#include "sauce/error.hpp"

using namespace sauce;
using sauce::testing::four_docs;
using sauce::testing::TempDir;

TEST_SUITE("corpus") {

TEST_CASE("tokenize splits on punctuation and lowercases") {
  CHECK(tokenize("Lunt Filter, 579!") == std::vector<std::string>{"lunt", "filter", "579"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("  ,;-- ").empty());
  CHECK(tokenize("a a b") == std::vector<std::string>{"a", "a", "b"});
  CHECK(make_document("x", "a a b").terms == std::vector<std::string>{"a", "b"});
}

TEST_CASE("tokenize handles non-ASCII alphanumerics") {
  CHECK(tokenize("Ångström café-Straße") ==
        std::vector<std::string>{"ångström", "café", "straße"});
  CHECK(tokenize("ΓΑΛΑΞΊΑ 42") == std::vector<std::string>{"γαλαξία", "42"});
  // An invalid byte separates tokens and is dropped.
  CHECK(tokenize("ab\xff" "cd") == std::vector<std::string>{"ab", "cd"});
}

TEST_CASE("tokenize is idempotent on its joined output") {
  for (const char* text : {"Lunt Filter, 579!", "  Mixed CASE -- text\twith\ntabs", "x"}) {
    const auto once = tokenize(text);
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    CHECK(tokenize(joined) == once);
  }
}

TEST_CASE("normalize_text lowercases and collapses whitespace") {
  CHECK(normalize_text("  F - Stop\n\tlens  ") == "f - stop lens");
  CHECK(normalize_text("") == "");
}

TEST_CASE("read_jsonl reads documents in file order") {
  TempDir dir;
  const auto path = dir / "c.jsonl";
  {
    std::ofstream out(path);
    out << R"({"id":"d1","text":"a b"})" << "\n"
        << R"({"id":"d2","text":"b c"})" << "\n\n"
        << R"({"id":"d3","text":""})" << "\n"
        << R"({"id":"d4","text":"A, a"})" << "\n";
  }
  const auto docs = read_jsonl(path);
  REQUIRE(docs.size() == 4);
  CHECK(docs[0].id == "d1");
  CHECK(docs[0].terms == std::vector<std::string>{"a", "b"});
  CHECK(docs[2].terms.empty());
  CHECK(docs[3].id == "d4");
  CHECK(docs[3].terms == std::vector<std::string>{"a"});
}

TEST_CASE("read_jsonl reports malformed lines and duplicate ids") {
  TempDir dir;
  const auto bad = dir / "bad.jsonl";
  {
    std::ofstream out(bad);
    out << R"({"id":"d1","text":"a"})" << "\n" << "{not json\n";
  }
  CHECK_THROWS_WITH_AS(read_jsonl(bad), doctest::Contains(":2:"), InputError);

  const auto missing = dir / "missing_field.jsonl";
  {
    std::ofstream out(missing);
    out << R"({"id":"d1"})" << "\n";
  }
  CHECK_THROWS_WITH_AS(read_jsonl(missing), doctest::Contains(":1:"), InputError);

  const auto dup = dir / "dup.jsonl";
  {
    std::ofstream out(dup);
    out << R"({"id":"d1","text":"a"})" << "\n" << R"({"id":"d1","text":"b"})" << "\n";
  }
  CHECK_THROWS_WITH_AS(read_jsonl(dup), doctest::Contains("\"d1\""), InputError);
  CHECK_THROWS_AS(read_jsonl(dir / "nope.jsonl"), InputError);
}

TEST_CASE("count_documents on the four-document fixture") {
  const auto docs = four_docs();
  const auto v = count_documents(docs);
  CHECK(v.n_docs() == 4);
  REQUIRE(v.size() == 6);
  const std::vector<std::string> order{"a", "b", "c", "d", "e", "f"};
  const std::vector<std::uint64_t> dc{4, 2, 2, 1, 1, 1};
  for (TermId id = 0; id < 6; ++id) {
    CHECK(v.term(id) == order[id]);
    CHECK(v.dc(id) == dc[id]);
    CHECK(*v.find(order[id]) == id);
  }
  CHECK(v.is_canonical());
  CHECK_FALSE(v.find("zzz").has_value());
}

TEST_CASE("count_documents edge cases") {
  const auto empty = count_documents(std::vector<Document>{});
  CHECK(empty.n_docs() == 0);
  CHECK(empty.size() == 0);

  const auto single = count_documents(std::vector<Document>{make_document("x", "x")});
  CHECK(single.n_docs() == 1);
  CHECK(single.dc(*single.find("x")) == 1);
}

TEST_CASE("document counts ignore within-document repeats") {
  const std::vector<Document> docs{make_document("1", "w w w w"), make_document("2", "w")};
  const auto v = count_documents(docs);
  CHECK(v.dc(*v.find("w")) == 2);
}

TEST_CASE("merge_counts sums and has an identity") {
  PartialCounts a;
  a.terms["a"] = {2, {0, 0}};
  a.n_docs = 2;
  PartialCounts b;
  b.terms["a"] = {1, {2, 0}};
  b.terms["b"] = {1, {2, 1}};
  b.n_docs = 1;
  const auto m = merge_counts(a, b);
  CHECK(m.n_docs == 3);
  CHECK(m.terms.at("a").dc == 3);
  CHECK(m.terms.at("a").first == FirstSeen{0, 0});
  CHECK(m.terms.at("b").dc == 1);
  CHECK(merge_counts(a, PartialCounts{}) == a);
  CHECK(merge_counts(PartialCounts{}, a) == a);
}

TEST_CASE("merging three partitions in every order equals the sequential count") {
  std::mt19937_64 rng(11);
  const auto docs = oracle::random_corpus(rng, 30, 20);
  const auto sequential = count_documents(docs);

  const std::span<const Document> all(docs);
  const auto cut1 = docs.size() / 3, cut2 = 2 * docs.size() / 3;
  std::vector<PartialCounts> parts{count_partition(all.subspan(0, cut1), 0),
                                   count_partition(all.subspan(cut1, cut2 - cut1), cut1),
                                   count_partition(all.subspan(cut2), cut2)};
  std::vector<int> perm{0, 1, 2};
  int n_perms = 0;
  do {
    PartialCounts acc;
    for (int i : perm) acc = merge_counts(std::move(acc), parts[i]);
    CHECK(Vocabulary::from_counts(acc) == sequential);
    ++n_perms;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(n_perms == 6);
}

TEST_CASE("property: parallel counting matches a brute-force membership count") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto docs = oracle::random_corpus(rng, 40, 25);
    const auto v1 = count_documents(docs, 1);
    for (unsigned threads : {2u, 3u, 7u}) CHECK(count_documents(docs, threads) == v1);

    std::map<std::string, std::uint64_t> brute;
    for (const auto& d : docs) {
      const auto toks = tokenize(d.text);
      for (const auto& t : std::set<std::string>(toks.begin(), toks.end())) ++brute[t];
    }
    REQUIRE(brute.size() == v1.size());
    for (const auto& [t, c] : brute) CHECK(v1.dc(*v1.find(t)) == c);
    for (TermId id = 0; id < v1.size(); ++id) CHECK(v1.dc(id) <= v1.n_docs());
  }
}

TEST_CASE("document counts are invariant under document order") {
  std::mt19937_64 rng(5);
  auto docs = oracle::random_corpus(rng, 30, 15);
  const auto base = count_documents(docs);
  std::shuffle(docs.begin(), docs.end(), rng);
  const auto shuffled = count_documents(docs);
  for (TermId id = 0; id < base.size(); ++id) {
    CHECK(shuffled.dc(*shuffled.find(base.term(id))) == base.dc(id));
  }
}

TEST_CASE("intern appends and canonicalize restores DC order") {
  auto v = count_documents(four_docs());
  const auto g = v.intern("g");
  CHECK(g == 6);
  CHECK(v.intern("g") == 6);
  v.increment(g);
  v.increment(g);
  v.increment(g);
  CHECK_FALSE(v.is_canonical());
  const auto remap = v.canonicalize();
  CHECK(v.is_canonical());
  CHECK(remap[6] == 1);  // dc 3 now ranks after a (4), before b (2)
  CHECK(v.term(1) == "g");
  CHECK(*v.find("b") == 2);
}

}  // TEST_SUITE
