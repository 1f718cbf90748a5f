#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sauce/baselines.hpp"
#include "sauce/corpus.hpp"
#include "sauce/error.hpp"
#include "sauce/eval.hpp"
#include "sauce/retrieval.hpp"
#include "sauce/signature.hpp"
#include "sauce/synthetic.hpp"

namespace py = pybind11;
using namespace sauce;

namespace {

std::vector<Document> to_documents(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<Document> docs;
  docs.reserve(pairs.size());
  for (const auto& [id, text] : pairs) docs.push_back(make_document(id, text));
  return docs;
}

std::vector<std::pair<std::string, double>> as_pairs(const std::vector<RankedDoc>& ranked) {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(ranked.size());
  for (const auto& r : ranked) out.emplace_back(r.doc_id, r.score);
  return out;
}

}  // namespace

PYBIND11_MODULE(_sauce, m) {
  m.doc() = "Seed-based corpus expansion with truncated sparse document signatures";

  auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<LoadError>(m, "LoadError", input_error.ptr());

  py::class_<Document>(m, "Document")
      .def(py::init(&make_document), py::arg("id"), py::arg("text"))
      .def_readonly("id", &Document::id)
      .def_readonly("text", &Document::text)
      .def_readonly("terms", &Document::terms)
      .def("__repr__", [](const Document& d) { return "Document(" + py::repr(py::str(d.id)).cast<std::string>() + ")"; });

  m.def("tokenize", &tokenize, py::arg("text"));
  m.def("normalize_text", &normalize_text, py::arg("text"));
  m.def("read_jsonl", &read_jsonl, py::arg("path"));

  py::class_<SignatureParams>(m, "SignatureParams")
      .def(py::init([](std::uint32_t k1, std::uint32_t k2) {
             SignatureParams p{k1, k2};
             p.validate();
             return p;
           }),
           py::arg("k1") = 1000, py::arg("k2") = 100)
      .def_readonly("k1", &SignatureParams::k1)
      .def_readonly("k2", &SignatureParams::k2);

  py::class_<UpdateResult>(m, "UpdateResult")
      .def_readonly("newly_stale", &UpdateResult::newly_stale)
      .def_readonly("dim_before", &UpdateResult::dim_before)
      .def_readonly("dim_after", &UpdateResult::dim_after);

  py::class_<SignatureIndex>(m, "SignatureIndex")
      .def_property_readonly("k1", [](const SignatureIndex& i) { return i.params().k1; })
      .def_property_readonly("k2", [](const SignatureIndex& i) { return i.params().k2; })
      .def_property_readonly("dim", &SignatureIndex::dim)
      .def_property_readonly("n_docs", [](const SignatureIndex& i) { return i.vocab().n_docs(); })
      .def_property_readonly("vocab_size", [](const SignatureIndex& i) { return i.vocab().size(); })
      .def_property_readonly("stale", [](const SignatureIndex& i) { return i.stale().size(); })
      .def("__len__", &SignatureIndex::size)
      .def("term", [](const SignatureIndex& i, TermId id) { return i.vocab().term(id); })
      .def("dc", [](const SignatureIndex& i, std::string_view t) -> std::optional<std::uint64_t> {
        const auto id = i.vocab().find(t);
        if (!id) return std::nullopt;
        return i.vocab().dc(*id);
      })
      .def("signature",
           [](const SignatureIndex& i, std::string_view doc_id) -> std::optional<std::vector<TermId>> {
             const auto* s = i.find(doc_id);
             if (!s) return std::nullopt;
             return s->term_ids;
           })
      .def("update", &SignatureIndex::update, py::arg("doc"))
      .def("resign_stale", &SignatureIndex::resign_stale)
      .def("resign_all", &SignatureIndex::resign_all)
      .def("save", [](const SignatureIndex& i, const std::filesystem::path& p) { save_index(i, p); })
      .def("__eq__", &SignatureIndex::operator==);

  m.def("build_index", [](const std::vector<Document>& docs, const SignatureParams& p,
                          unsigned threads) {
          py::gil_scoped_release release;
          return build_index(docs, p, threads);
        },
        py::arg("docs"), py::arg("params") = SignatureParams{}, py::arg("threads") = 1);
  m.def("load_index", &load_index, py::arg("path"));

  m.def("query_signature", [](const std::vector<Document>& seeds, const SignatureIndex& index) {
    return query_signature(seeds, index);
  });
  m.def("merge_and_score", [](const std::vector<TermId>& a, const std::vector<TermId>& b) {
    return merge_and_score(a, b);
  });
  m.def("expand",
        [](const SignatureIndex& index, const std::vector<Document>& seeds, std::size_t top_k,
           unsigned threads) {
          std::vector<std::pair<std::string, std::uint32_t>> out;
          py::gil_scoped_release release;
          for (auto& s : expand(index, seeds, top_k, threads)) out.emplace_back(s.doc_id, s.score);
          return out;
        },
        py::arg("index"), py::arg("seeds"), py::arg("top_k"), py::arg("threads") = 1);

  m.def("baseline_expand",
        [](std::string_view method, const std::vector<Document>& corpus,
           const std::vector<Document>& seeds, std::size_t top_k,
           const std::vector<std::string>& phrases, std::uint64_t rng_seed, std::size_t hash_dim,
           unsigned threads) {
          BaselineInputs in;
          in.corpus = corpus;
          in.seeds = seeds;
          const auto normalized = PhraseSet(phrases).phrases();
          in.phrases = normalized;
          in.rng_seed = rng_seed;
          in.hash_dim = hash_dim;
          in.threads = threads;
          return as_pairs(baseline_expand(parse_method(method), in, top_k));
        },
        py::arg("method"), py::arg("corpus"), py::arg("seeds"), py::arg("top_k"),
        py::arg("phrases") = std::vector<std::string>{}, py::arg("rng_seed") = 0,
        py::arg("hash_dim") = 100, py::arg("threads") = 1);
  m.def("hash_vector", [](const Document& d, std::size_t dim) { return hash_vector(d, dim).values; });

  m.def("coverage",
        [](const std::vector<std::string>& phrases, const std::vector<Document>& retrieved) {
          return coverage(PhraseSet(phrases), retrieved).fraction;
        },
        py::arg("phrases"), py::arg("retrieved"));
  m.def("ndcg", [](const std::vector<std::string>& ranked, const Judgments& j, std::size_t n) {
    return ndcg(ranked, j, n);
  });
  m.def("map_and_recall",
        [](const std::vector<std::string>& ranked, const Judgments& j, std::size_t n) {
          const auto r = map_and_recall(ranked, j, n);
          return std::pair{r.map, r.recall};
        });
  m.def("pr_curve", [](const std::vector<std::string>& ranked, const Judgments& j) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : pr_curve(ranked, j)) out.emplace_back(p.recall, p.precision);
    return out;
  });

  m.def("generate_corpus",
        [](std::size_t n_docs, std::size_t domain_docs, std::size_t n_phrases, std::size_t n_seeds,
           std::uint64_t seed) {
          SyntheticConfig c;
          c.n_docs = n_docs;
          c.domain_docs = domain_docs;
          c.n_phrases = n_phrases;
          c.n_seeds = n_seeds;
          c.seed = seed;
          auto s = generate_corpus(c);
          return py::make_tuple(std::move(s.docs), std::move(s.seeds), std::move(s.phrases));
        },
        py::arg("n_docs") = 10000, py::arg("domain_docs") = 400, py::arg("n_phrases") = 100,
        py::arg("n_seeds") = 20, py::arg("seed") = 7);
}
