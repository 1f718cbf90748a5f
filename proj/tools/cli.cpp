#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sauce/baselines.hpp"
#include "sauce/corpus.hpp"
#include "sauce/error.hpp"
#include "sauce/eval.hpp"
#include "sauce/parallel.hpp"
#include "sauce/retrieval.hpp"
#include "sauce/signature.hpp"
#include "sauce/synthetic.hpp"

namespace sauce::cli {
namespace {

using nlohmann::json;

std::string format_score(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed: " + path);
}

std::string results_tsv(const std::vector<RankedDoc>& ranked) {
  std::string s;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    s += std::to_string(i + 1);
    s += '\t';
    s += ranked[i].doc_id;
    s += '\t';
    s += format_score(ranked[i].score);
    s += '\n';
  }
  return s;
}

std::vector<std::string> read_result_ids(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::string> ids;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    const auto a = line.find('\t');
    const auto b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos) {
      throw InputError(path + ":" + std::to_string(line_no) + ": expected rank<TAB>doc_id<TAB>score");
    }
    ids.push_back(line.substr(a + 1, b - a - 1));
  }
  return ids;
}

std::vector<std::size_t> parse_ks(const std::string& text) {
  std::vector<std::size_t> ks;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t k = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), k);
    if (ec != std::errc() || ptr != item.data() + item.size() || k == 0) {
      throw InputError("bad --ks entry \"" + item + "\"");
    }
    ks.push_back(k);
  }
  return ks;
}

struct BuildArgs {
  std::string corpus, out;
  std::uint32_t k1 = 1000, k2 = 100;
  unsigned threads = default_threads();
};

int cmd_build(const BuildArgs& a, std::ostream& out) {
  const auto [index, ms] = timed([&] {
    const auto docs = read_jsonl(a.corpus);
    return build_index(docs, SignatureParams{a.k1, a.k2}, a.threads);
  });
  save_index(index, a.out);
  std::uint64_t payload = 0;
  for (const auto& s : index.signatures()) payload += 4 * s.term_ids.size();
  out << json{{"n_docs", index.vocab().n_docs()},
              {"vocab_size", index.vocab().size()},
              {"dim", index.dim()},
              {"k1", a.k1},
              {"k2", a.k2},
              {"signature_bytes", payload},
              {"elapsed_ms", ms.count()}}
             .dump()
      << '\n';
  return kOk;
}

struct UpdateArgs {
  std::string index, docs, out;
  bool resign = false;
};

int cmd_update(const UpdateArgs& a, std::ostream& out) {
  auto index = load_index(a.index);
  const auto dim_before = index.dim();
  std::size_t added = 0;
  for_each_jsonl(a.docs, [&](Document&& doc) {
    index.update(doc);
    ++added;
  });
  const auto stale = index.stale().size();
  if (a.resign) index.resign_all();
  save_index(index, a.out.empty() ? a.index : a.out);
  out << json{{"added", added},
              {"n_docs", index.vocab().n_docs()},
              {"vocab_size", index.vocab().size()},
              {"dim_before", dim_before},
              {"dim", index.dim()},
              {"stale", stale},
              {"resigned", a.resign}}
             .dump()
      << '\n';
  return kOk;
}

struct ExpandArgs {
  std::string index, seeds, corpus, vectors, phrases, out, method = "sauce";
  std::size_t top_k = 500000;
  std::size_t hash_dim = 100;
  std::uint64_t rng_seed = 0;
  unsigned threads = default_threads();
  bool normalize = false;
};

int cmd_expand(const ExpandArgs& a, std::ostream& out) {
  const auto method = parse_method(a.method);
  auto need = [&](const std::string& value, const char* flag) {
    if (value.empty()) {
      throw InputError("method " + a.method + " requires " + flag);
    }
  };
  switch (method) {
    case Method::kSauce: need(a.index, "--index"); need(a.seeds, "--seeds"); break;
    case Method::kTfidf:
    case Method::kHash: need(a.corpus, "--corpus"); need(a.seeds, "--seeds"); break;
    case Method::kDense: need(a.vectors, "--vectors"); need(a.seeds, "--seeds"); break;
    case Method::kQuery: need(a.corpus, "--corpus"); need(a.phrases, "--phrases"); break;
    case Method::kRandom:
      if (a.index.empty() && a.corpus.empty()) {
        throw InputError("method random requires --index or --corpus");
      }
      break;
  }
  if (a.normalize && method != Method::kSauce) {
    throw InputError("--normalize applies to method sauce only");
  }

  const auto seeds = a.seeds.empty() ? std::vector<Document>{} : read_jsonl(a.seeds);
  const auto corpus = a.corpus.empty() ? std::vector<Document>{} : read_jsonl(a.corpus);
  std::optional<SignatureIndex> index;
  if (!a.index.empty()) index = load_index(a.index);
  std::optional<VectorStore> vectors;
  if (!a.vectors.empty()) vectors = load_vector_store(a.vectors);
  std::vector<std::string> phrases;
  if (!a.phrases.empty()) phrases = load_phrases(a.phrases).phrases();

  std::size_t query_terms = 0;
  auto [ranked, ms] = timed([&] {
    if (method == Method::kSauce) {
      if (a.normalize) return expand_normalized(*index, seeds, a.top_k, a.threads);
      const auto q = query_signature(seeds, *index);
      query_terms = q.size();
      std::vector<RankedDoc> r;
      for (auto& s : expand_query(*index, q, a.top_k, a.threads)) {
        r.push_back({std::move(s.doc_id), static_cast<double>(s.score)});
      }
      return r;
    }
    std::vector<std::string> ids;
    if (index) {
      for (const auto& s : index->signatures()) ids.push_back(s.doc_id);
    }
    BaselineInputs in;
    in.corpus = corpus;
    in.seeds = seeds;
    in.doc_ids = ids;
    in.vectors = vectors ? &*vectors : nullptr;
    in.phrases = phrases;
    in.rng_seed = a.rng_seed;
    in.hash_dim = a.hash_dim;
    in.threads = a.threads;
    return baseline_expand(method, in, a.top_k);
  });

  write_text(a.out, results_tsv(ranked));
  json summary{{"method", a.method}, {"returned", ranked.size()}, {"elapsed_ms", ms.count()}};
  if (method == Method::kSauce) summary["query_terms"] = query_terms;
  out << summary.dump() << '\n';
  return kOk;
}

struct EvalArgs {
  std::string results, corpus, phrases, judgments, ks, out;
  std::optional<std::size_t> cutoff;
  std::optional<double> elapsed_ms;
  unsigned threads = default_threads();
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const auto ranked = read_result_ids(a.results);
  const auto phrases = load_phrases(a.phrases);
  if (phrases.empty()) throw InputError("phrase set " + a.phrases + " is empty");
  const auto corpus = read_jsonl(a.corpus);
  const PhraseOccurrences occ(phrases, corpus, a.threads);

  EvalReport report;
  report.coverage = occ.coverage(ranked);
  report.histogram = term_histogram(occ, ranked);
  report.elapsed_ms = a.elapsed_ms;
  if (!a.ks.empty()) {
    const auto ks = parse_ks(a.ks);
    report.ablation = ablation_sweep(
        [&](std::size_t k) {
          return std::vector<std::string>(ranked.begin(),
                                          ranked.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranked.size())));
        },
        occ, ks);
    write_text(a.out + ".ablation.tsv", ablation_tsv(report.ablation));
  }
  if (!a.judgments.empty()) {
    const auto judgments = load_judgments(a.judgments);
    const auto n = a.cutoff.value_or(std::max<std::size_t>(ranked.size(), 1));
    report.ndcg = ndcg(ranked, judgments, n);
    const auto mr = map_and_recall(ranked, judgments, n);
    report.map = mr.map;
    report.recall = mr.recall;
    report.pr = pr_curve(ranked, judgments);
    write_text(a.out + ".pr.tsv", pr_tsv(report.pr));
  }
  write_text(a.out + ".histogram.tsv", histogram_tsv(report.histogram));
  const auto summary = report.summary_json().dump();
  write_text(a.out + ".json", summary + "\n");
  out << summary << '\n';
  return kOk;
}

struct GenerateArgs {
  SyntheticConfig config;
  std::string corpus, seeds, phrases;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const auto synth = generate_corpus(a.config);
  write_jsonl(synth.docs, a.corpus);
  if (!a.seeds.empty()) write_jsonl(synth.seeds, a.seeds);
  if (!a.phrases.empty()) {
    std::string text;
    for (const auto& p : synth.phrases) text += p + "\n";
    write_text(a.phrases, text);
  }
  out << json{{"n_docs", synth.docs.size()},
              {"domain_docs", synth.domain_ids.size()},
              {"seeds", synth.seeds.size()},
              {"phrases", synth.phrases.size()}}
             .dump()
      << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Corpus expansion with truncated sparse document signatures"};
  app.name("sauce");
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build a signature index from a JSONL corpus");
  b->add_option("--corpus", build.corpus, "JSONL corpus {\"id\",\"text\"}")->required();
  b->add_option("--k1", build.k1, "Minimum document count for a term to survive")
      ->check(CLI::PositiveNumber);
  b->add_option("--k2", build.k2, "Maximum set bits per document")->check(CLI::PositiveNumber);
  b->add_option("--out", build.out, "Index file to write")->required();
  b->add_option("--threads", build.threads)->check(CLI::PositiveNumber);

  UpdateArgs update;
  auto* u = app.add_subcommand("update", "Stream new documents into an index");
  u->add_option("--index", update.index)->required();
  u->add_option("--doc-jsonl", update.docs, "JSONL file of new documents")->required();
  u->add_flag("--resign", update.resign, "Re-sign every document after the update");
  u->add_option("--out", update.out, "Write here instead of overwriting --index");

  ExpandArgs expand;
  auto* e = app.add_subcommand("expand", "Rank documents against a seed corpus");
  e->add_option("--index", expand.index);
  e->add_option("--seeds", expand.seeds, "JSONL seed corpus");
  e->add_option("--top-k", expand.top_k)->check(CLI::PositiveNumber);
  e->add_option("--method", expand.method)
      ->check(CLI::IsMember({"sauce", "tfidf", "hash", "dense", "random", "query"}));
  e->add_option("--corpus", expand.corpus, "JSONL corpus (tfidf, hash, query, random)");
  e->add_option("--vectors", expand.vectors, "Vector store file (dense)");
  e->add_option("--phrases", expand.phrases, "Lexicon, one phrase per line (query)");
  e->add_option("--rng-seed", expand.rng_seed);
  e->add_option("--hash-dim", expand.hash_dim)->check(CLI::PositiveNumber);
  e->add_option("--threads", expand.threads)->check(CLI::PositiveNumber);
  e->add_flag("--normalize", expand.normalize, "Divide overlap by signature length");
  e->add_option("--out", expand.out, "Results TSV: rank, doc_id, score")->required();

  EvalArgs ev;
  auto* v = app.add_subcommand("eval", "Score a results file");
  v->add_option("--results", ev.results)->required();
  v->add_option("--corpus", ev.corpus)->required();
  v->add_option("--phrases", ev.phrases)->required();
  v->add_option("--judgments", ev.judgments, "TSV doc_id<TAB>0|1");
  v->add_option("--ks", ev.ks, "Comma-separated ascending top-k values for the ablation");
  v->add_option("--cutoff", ev.cutoff, "Rank cutoff for nDCG/MAP/recall (default: all)");
  v->add_option("--elapsed-ms", ev.elapsed_ms, "Query time to record in the report");
  v->add_option("--threads", ev.threads)->check(CLI::PositiveNumber);
  v->add_option("--out", ev.out, "Output prefix")->required();

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic Zipfian corpus with a planted domain");
  g->add_option("--out-corpus", gen.corpus)->required();
  g->add_option("--out-seeds", gen.seeds);
  g->add_option("--out-phrases", gen.phrases);
  g->add_option("--n-docs", gen.config.n_docs);
  g->add_option("--domain-docs", gen.config.domain_docs);
  g->add_option("--n-phrases", gen.config.n_phrases);
  g->add_option("--n-seeds", gen.config.n_seeds);
  g->add_option("--seed", gen.config.seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex, out, err);
    return kUsageError;
  }

  try {
    if (*b) return cmd_build(build, out);
    if (*u) return cmd_update(update, out);
    if (*e) return cmd_expand(expand, out);
    if (*v) return cmd_eval(ev, out);
    if (*g) return cmd_generate(gen, out);
  } catch (const InputError& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsageError;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << '\n';
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace sauce::cli
