#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <thread>

#include "fixtures.hpp"
#include "sauce/error.hpp"
#include "sauce/eval.hpp"

using namespace sauce;
using sauce::testing::TempDir;

namespace {

std::vector<Document> lens_corpus() {
  return {make_document("d1", "The Lunt filter blocks H-alpha light"),
          make_document("d2", "A prime focus camera and an f-stop dial"),
          make_document("d3", "Weather today is mild"),
          make_document("d4", "Eyepiece  focal   LENGTH matters"),
          make_document("d5", "lunt filter review")};
}

// Ten phrases; d1 + d2 + d4 contain seven of them.
std::vector<std::string> lens_phrases() {
  return {"lunt filter", "h-alpha", "prime focus", "f-stop", "eyepiece",
          "focal length", "camera", "barlow lens", "dew shield", "star diagonal"};
}

// Independent DCG with binary gains.
double reference_dcg(const std::vector<int>& gains) {
  double s = 0;
  for (std::size_t i = 0; i < gains.size(); ++i) s += gains[i] / std::log2(i + 2.0);
  return s;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("PhraseSet normalizes and drops blanks") {
  const PhraseSet s({"  Lunt   Filter ", "", "   ", "F-Stop"});
  CHECK(s.phrases() == std::vector<std::string>{"lunt filter", "f-stop"});
}

TEST_CASE("coverage counts phrases found in the retrieved set") {
  const auto corpus = lens_corpus();
  const PhraseSet s(lens_phrases());
  const std::vector<Document> retrieved{corpus[0], corpus[1], corpus[3]};
  const auto c = coverage(s, retrieved);
  CHECK(c.found_count == 7);
  CHECK(c.fraction == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(c.found[0]);
  CHECK_FALSE(c.found[7]);

  CHECK(coverage(s, std::span<const Document>{}).fraction == 0.0);
  CHECK(coverage(s, corpus).found_count == 7);
  CHECK_THROWS_AS(coverage(PhraseSet{}, corpus), InputError);

  const PhraseOccurrences occ(s, corpus);
  const std::vector<std::string> ids{"d1", "d2", "d4", "unknown"};
  CHECK(occ.coverage(ids).found_count == 7);
  CHECK(occ.corpus_frequency(0) == 2);  // "lunt filter" in d1 and d5
}

TEST_CASE("ndcg") {
  const Judgments j{{"r1", true}, {"r2", true}, {"n1", false}};
  const std::vector<std::string> ranked{"r1", "n1", "r2"};
  const double expected = 1.5 / (1.0 + 1.0 / std::log2(3.0));
  CHECK(ndcg(ranked, j, 3) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(ndcg(ranked, j, 3) - 0.9197207891481876) < 1e-9);

  const std::vector<std::string> perfect{"r1", "r2", "n1"};
  CHECK(ndcg(perfect, j, 3) == doctest::Approx(1.0));
  CHECK(ndcg(ranked, Judgments{{"x", false}}, 3) == 0.0);
  // Cutoff shorter than the relevant set.
  CHECK(ndcg(ranked, j, 1) == doctest::Approx(1.0));
}

TEST_CASE("map and recall") {
  const Judgments j{{"r1", true}, {"r2", true}, {"n1", false}};
  const std::vector<std::string> ranked{"r1", "n1", "r2"};
  const auto mr = map_and_recall(ranked, j, 3);
  CHECK(mr.map == doctest::Approx(5.0 / 6).epsilon(1e-12));
  CHECK(mr.recall == 1.0);

  const auto cut = map_and_recall(ranked, j, 2);
  CHECK(cut.map == 1.0);
  CHECK(cut.recall == 0.5);

  const auto none = map_and_recall(std::vector<std::string>{"n1"}, j, 1);
  CHECK(none.map == 0.0);
  CHECK(none.recall == 0.0);
}

TEST_CASE("pr_curve") {
  const Judgments j{{"r", true}};
  const auto pr = pr_curve(std::vector<std::string>{"n", "r"}, j);
  CHECK(pr == std::vector<PrPoint>{{0.0, 0.0}, {1.0, 0.5}});
  CHECK_THROWS_AS(pr_curve(std::vector<std::string>{"n"}, Judgments{{"n", false}}), InputError);
}

TEST_CASE("property: metrics match an independent computation and stay in [0, 1]") {
  std::mt19937_64 rng(83);
  std::bernoulli_distribution coin(0.3);
  std::uniform_int_distribution<int> len(1, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n_docs = len(rng);
    Judgments j;
    std::vector<std::string> ranked;
    int total_rel = 0;
    for (int i = 0; i < n_docs; ++i) {
      const auto id = "d" + std::to_string(i);
      ranked.push_back(id);
      const bool rel = coin(rng);
      j[id] = rel;
      total_rel += rel;
    }
    // A few relevant documents that were never retrieved.
    for (int i = 0; i < trial % 3; ++i) {
      j["missing" + std::to_string(i)] = true;
      ++total_rel;
    }
    std::uniform_int_distribution<int> cutoff_dist(1, n_docs);
    const auto n = static_cast<std::size_t>(cutoff_dist(rng));

    std::vector<int> gains;
    for (std::size_t i = 0; i < n; ++i) gains.push_back(j[ranked[i]] ? 1 : 0);
    std::vector<int> ideal(std::min<std::size_t>(n, total_rel), 1);
    const double want_ndcg = total_rel == 0 ? 0.0 : reference_dcg(gains) / reference_dcg(ideal);

    double ap = 0;
    int hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (gains[i]) ap += static_cast<double>(++hits) / static_cast<double>(i + 1);
    }
    const double want_map = hits == 0 ? 0.0 : ap / hits;
    const double want_recall = total_rel == 0 ? 0.0 : static_cast<double>(hits) / total_rel;

    const double got_ndcg = ndcg(ranked, j, n);
    const auto mr = map_and_recall(ranked, j, n);
    CHECK(std::abs(got_ndcg - want_ndcg) < 1e-9);
    CHECK(std::abs(mr.map - want_map) < 1e-9);
    CHECK(std::abs(mr.recall - want_recall) < 1e-9);
    for (double m : {got_ndcg, mr.map, mr.recall}) {
      CHECK(m >= 0.0);
      CHECK(m <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("term histogram sorts by corpus frequency") {
  const auto corpus = lens_corpus();
  const PhraseOccurrences occ(PhraseSet(lens_phrases()), corpus);
  const std::vector<std::string> ids{"d2"};
  const auto h = term_histogram(occ, ids);
  REQUIRE(h.size() == 10);
  CHECK(h[0].phrase == "lunt filter");
  CHECK(h[0].frequency == 2);
  CHECK_FALSE(h[0].found);
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i - 1].frequency >= h[i].frequency);
  for (const auto& row : h) {
    CHECK(row.found == (row.phrase == "prime focus" || row.phrase == "f-stop" ||
                        row.phrase == "camera"));
  }
  const auto tsv = histogram_tsv(h);
  CHECK(tsv.rfind("phrase\tfrequency\tfound\nlunt filter\t2\t0\n", 0) == 0);
}

TEST_CASE("ablation sweep is monotone in top_k") {
  const auto corpus = lens_corpus();
  const PhraseOccurrences occ(PhraseSet(lens_phrases()), corpus);
  const std::vector<std::string> order{"d3", "d1", "d2", "d5", "d4"};
  const auto prefix = [&](std::size_t k) {
    return std::vector<std::string>(order.begin(), order.begin() + std::min(k, order.size()));
  };
  const std::vector<std::size_t> ks{1, 2, 3, 5};
  const auto rows = ablation_sweep(prefix, occ, ks);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].not_found == 10);
  CHECK(rows[1].not_found == 8);
  CHECK(rows[2].not_found == 5);
  CHECK(rows[3].not_found == 3);
  const std::vector<std::size_t> bad{3, 2};
  CHECK_THROWS_AS(ablation_sweep(prefix, occ, bad), InputError);
  CHECK(ablation_tsv(rows).rfind("top_k\tnot_found\n1\t10\n", 0) == 0);
}

TEST_CASE("property: coverage is monotone under nested retrieved sets") {
  std::mt19937_64 rng(89);
  std::uniform_int_distribution<int> word(0, 15), len(0, 12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Document> corpus;
    for (int d = 0; d < 25; ++d) {
      std::string text;
      for (int i = len(rng); i > 0; --i) text += "w" + std::to_string(word(rng)) + " ";
      corpus.push_back(make_document("d" + std::to_string(d), text));
    }
    std::vector<std::string> raw;
    for (int p = 0; p < 8; ++p) {
      raw.push_back("w" + std::to_string(word(rng)) +
                    (p % 2 ? " w" + std::to_string(word(rng)) : ""));
    }
    const PhraseOccurrences occ(PhraseSet(raw), corpus);
    std::vector<std::string> ids;
    for (const auto& d : corpus) ids.push_back(d.id);
    std::shuffle(ids.begin(), ids.end(), rng);
    std::size_t prev = 0;
    for (std::size_t k = 0; k <= ids.size(); ++k) {
      const auto found = occ.coverage(std::span(ids).first(k)).found_count;
      CHECK(found >= prev);
      prev = found;
    }
  }
}

TEST_CASE("PhraseOccurrences does not depend on thread count") {
  const auto corpus = lens_corpus();
  const PhraseSet s(lens_phrases());
  const PhraseOccurrences one(s, corpus, 1), many(s, corpus, 4);
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    CHECK(std::ranges::equal(one.phrases_in(d), many.phrases_in(d)));
  }
}

TEST_CASE("mean trial coverage averages over seeds") {
  const auto corpus = lens_corpus();
  const PhraseOccurrences occ(PhraseSet(lens_phrases()), corpus);
  const std::vector<std::uint64_t> seeds{0, 1};
  const double m = mean_trial_coverage(
      [](std::uint64_t s) {
        return s == 0 ? std::vector<std::string>{"d1"} : std::vector<std::string>{"d3"};
      },
      occ, seeds);
  CHECK(m == doctest::Approx(0.1));
}

TEST_CASE("timed measures wall-clock time") {
  const auto [value, ms] = timed([] {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    return 42;
  });
  CHECK(value == 42);
  CHECK(ms.count() >= 19.0);
  const auto d = timed([] {});
  CHECK(d.count() >= 0.0);
}

TEST_CASE("summary json uses nulls for absent metrics") {
  EvalReport r;
  r.coverage.fraction = 0.5;
  r.coverage.found_count = 1;
  r.coverage.found = {true, false};
  r.elapsed_ms = 12.5;
  const auto j = r.summary_json();
  CHECK(j["coverage"] == 0.5);
  CHECK(j["phrases_found"] == 1);
  CHECK(j["phrases_total"] == 2);
  CHECK(j["ndcg"].is_null());
  CHECK(j["map"].is_null());
  CHECK(j["elapsed_ms"] == 12.5);
}

TEST_CASE("loaders") {
  TempDir dir;
  {
    std::ofstream(dir / "p.txt") << "Lunt Filter\n\n  f-stop\n";
    std::ofstream(dir / "j.tsv") << "d1\t1\nd2\t0\n";
    std::ofstream(dir / "bad.tsv") << "d1\tyes\n";
  }
  CHECK(load_phrases(dir / "p.txt").phrases() == std::vector<std::string>{"lunt filter", "f-stop"});
  const auto j = load_judgments(dir / "j.tsv");
  CHECK(j.at("d1"));
  CHECK_FALSE(j.at("d2"));
  CHECK_THROWS_AS(load_judgments(dir / "bad.tsv"), InputError);
  CHECK_THROWS_AS(load_phrases(dir / "none.txt"), InputError);
}

}  // TEST_SUITE
