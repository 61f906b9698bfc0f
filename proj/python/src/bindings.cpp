#include "scirank/bradford.hpp"
#include "scirank/centrality.hpp"
#include "scirank/error.hpp"
#include "scirank/evalkit.hpp"
#include "scirank/service.hpp"
#include "scirank/termrec.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace scirank;

namespace {

RankedList ranked(const py::list& ids) {
    RankedList l;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        l.entries.push_back(RankedEntry{ids[i].cast<std::string>(), 0.0, i + 1});
    }
    l.total_hits = l.entries.size();
    return l;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Search term recommendation, Bradfordizing and author centrality re-ranking";

    static py::exception<Error> error(m, "Error");
    py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<UnknownDocument>(m, "UnknownDocument", error.ptr());

    py::class_<BibRecord>(m, "BibRecord")
        .def(py::init<>())
        .def_readwrite("id", &BibRecord::id)
        .def_readwrite("title", &BibRecord::title)
        .def_readwrite("abstract", &BibRecord::abstract)
        .def_readwrite("journal", &BibRecord::journal)
        .def_readwrite("authors", &BibRecord::authors)
        .def_readwrite("controlled_terms", &BibRecord::controlled_terms)
        .def_readwrite("year", &BibRecord::year)
        .def_readwrite("doc_type", &BibRecord::doc_type)
        .def("__repr__", [](const BibRecord& r) { return "<BibRecord " + r.id + ">"; });

    py::class_<Corpus>(m, "Corpus")
        .def(py::init<>())
        .def(py::init<std::vector<BibRecord>>(), py::arg("records"))
        .def("__len__", &Corpus::size)
        .def_property_readonly("records", &Corpus::records)
        .def("get", [](const Corpus& c, const std::string& id) -> std::optional<BibRecord> {
            if (const auto* r = c.find(id)) return *r;
            return std::nullopt;
        });
    m.def("load_corpus", &load_corpus, py::arg("path"));
    m.def("save_corpus", &save_corpus, py::arg("path"), py::arg("corpus"));
    m.def("tokenize", &tokenize, py::arg("text"));

    py::class_<Query>(m, "Query")
        .def(py::init<>())
        .def(py::init([](std::vector<std::string> terms) { return Query{std::move(terms)}; }), py::arg("terms"))
        .def_static("parse", &Query::parse, py::arg("text"))
        .def_readwrite("terms", &Query::terms);

    py::class_<RankedEntry>(m, "RankedEntry")
        .def_readonly("doc_id", &RankedEntry::doc_id)
        .def_readonly("score", &RankedEntry::score)
        .def_readonly("rank", &RankedEntry::rank)
        .def("__repr__", [](const RankedEntry& e) {
            return "<RankedEntry " + std::to_string(e.rank) + " " + e.doc_id + ">";
        });

    py::class_<RankedList>(m, "RankedList")
        .def_readonly("query", &RankedList::query)
        .def_readonly("entries", &RankedList::entries)
        .def_readonly("total_hits", &RankedList::total_hits)
        .def_property_readonly("provenance", [](const RankedList& l) { return std::string(to_string(l.provenance)); })
        .def("ids", [](const RankedList& l) {
            std::vector<std::string> out;
            for (const auto& e : l.entries) out.push_back(e.doc_id);
            return out;
        });

    py::class_<InvertedIndex>(m, "InvertedIndex")
        .def_property_readonly("doc_count", &InvertedIndex::doc_count)
        .def_property_readonly("term_count", &InvertedIndex::term_count)
        .def("df", &InvertedIndex::df, py::arg("term"))
        .def("idf", &InvertedIndex::idf, py::arg("term"));
    m.def("build_index", &build_index, py::arg("corpus"));
    m.def(
        "search",
        [](const InvertedIndex& index, const Query& q, std::size_t k, bool require_abstract) {
            return search(index, q, k, SearchOptions{require_abstract});
        },
        py::arg("index"), py::arg("query"), py::arg("k") = 10, py::arg("require_abstract") = false);
    m.def(
        "search_all",
        [](const InvertedIndex& index, const Query& q, bool require_abstract) {
            return search_all(index, q, SearchOptions{require_abstract});
        },
        py::arg("index"), py::arg("query"), py::arg("require_abstract") = false);

    py::class_<TermScore>(m, "TermScore")
        .def_readonly("term", &TermScore::term)
        .def_readonly("score", &TermScore::score)
        .def("__repr__", [](const TermScore& t) { return "<TermScore " + t.term + ">"; });
    py::class_<AssociationModel>(m, "AssociationModel")
        .def_property_readonly("term_count", &AssociationModel::term_count)
        .def_property_readonly("pair_count", &AssociationModel::pair_count);
    m.def(
        "train_str", [](const Corpus& c, std::size_t min_df) { return train_str(c, TrainOptions{min_df}); },
        py::arg("corpus"), py::arg("min_df") = 2);
    m.def("recommend", &recommend, py::arg("model"), py::arg("term"), py::arg("k") = 4);
    m.def(
        "expand_query",
        [](const AssociationModel& model, const Query& q, std::size_t k) {
            const auto eq = expand_query(model, q, k);
            return py::make_tuple(eq.combined(), eq.added_terms);
        },
        py::arg("model"), py::arg("query"), py::arg("k") = 4,
        "Returns (combined query, added descriptors).");
    m.def(
        "log_likelihood_ratio",
        [](std::uint64_t n11, std::uint64_t n1x, std::uint64_t nx1, std::uint64_t n) {
            return log_likelihood_ratio(Contingency{n11, n1x, nx1, n});
        },
        py::arg("n11"), py::arg("n1x"), py::arg("nx1"), py::arg("n"));

    m.def(
        "journal_tally",
        [](const RankedList& results, const Corpus& corpus) {
            const auto t = tally_journals(results, corpus);
            std::vector<std::pair<std::string, std::size_t>> out;
            for (const auto& j : t.journals) out.emplace_back(j.journal, j.count);
            return out;
        },
        py::arg("results"), py::arg("corpus"));
    m.def(
        "bradford_zones",
        [](const RankedList& results, const Corpus& corpus) {
            const auto z = bradford_zones(tally_journals(results, corpus));
            std::vector<std::vector<std::string>> out;
            for (const auto& zone : z.zones) {
                auto& names = out.emplace_back();
                for (const auto& j : zone.journals) names.push_back(j.journal);
            }
            return out;
        },
        py::arg("results"), py::arg("corpus"));
    m.def("bradfordize", &bradfordize, py::arg("results"), py::arg("corpus"));

    m.def(
        "betweenness",
        [](std::vector<std::string> names, std::vector<std::pair<std::size_t, std::size_t>> edges) {
            const auto s = betweenness(CoauthorGraph(std::move(names), edges));
            std::map<std::string, double> out;
            for (std::size_t i = 0; i < s.authors.size(); ++i) out[s.authors[i]] = s.scores[i];
            return out;
        },
        py::arg("names"), py::arg("edges"), "Normalized betweenness per author name.");
    m.def(
        "rerank_by_centrality",
        [](const RankedList& results, const Corpus& corpus) {
            return rerank_by_centrality(results, betweenness(build_coauthor_graph(results, corpus)), corpus);
        },
        py::arg("results"), py::arg("corpus"));
    m.def(
        "ranked_list", [](const py::list& ids) { return ranked(ids); }, py::arg("doc_ids"),
        "Wraps doc ids in rank order as a result list.");

    m.def(
        "fleiss_kappa", [](std::vector<std::vector<std::size_t>> counts) { return fleiss_kappa(KappaInput{std::move(counts)}); },
        py::arg("counts"));
    m.def(
        "build_pool",
        [](const std::vector<std::vector<std::string>>& lists, std::size_t n) { return build_pool(lists, n); },
        py::arg("lists"), py::arg("n"));
    m.def("standard_error", &standard_error, py::arg("proportion"), py::arg("n"));
    m.def(
        "eval_counts",
        [](const std::filesystem::path& path) { return report_to_json(report_from_counts(load_counts(path))); },
        py::arg("path"), "Report JSON for a topic/service/relevant/not_relevant file.");
    m.def(
        "evaluate",
        [](const std::filesystem::path& judgments, const std::filesystem::path& runs, std::size_t top_n) {
            return report_to_json(evaluate(load_judgments(judgments), load_runs(runs), EvalOptions{top_n}));
        },
        py::arg("judgments"), py::arg("runs"), py::arg("top_n") = 10);

    py::class_<Engine>(m, "Engine")
        .def(py::init([](const Corpus& corpus, std::size_t min_df) {
                 return std::make_unique<Engine>(build_snapshot(corpus, TrainOptions{min_df}));
             }),
             py::arg("corpus"), py::arg("min_df") = 2)
        .def_static("load", [](const std::filesystem::path& dir) { return std::make_unique<Engine>(load_snapshot(dir)); },
                    py::arg("index_dir"))
        .def(
            "search",
            [](const Engine& e, const std::string& q, bool expand, std::size_t k_expand, const std::string& rerank,
               std::size_t k, bool require_abstract) {
                auto mode = parse_rerank(rerank);
                if (!mode) throw InvalidArgument("unknown rerank mode '" + rerank + "'");
                SearchRequest req{q, expand, k_expand, *mode, k, require_abstract};
                Response r;
                {
                    py::gil_scoped_release release;
                    r = e.handle_search(req);
                }
                return py::make_tuple(r.status, r.body.dump());
            },
            py::arg("q"), py::arg("expand") = false, py::arg("k_expand") = 4, py::arg("rerank") = "none",
            py::arg("k") = 10, py::arg("require_abstract") = false)
        .def(
            "recommend",
            [](const Engine& e, const std::string& term, long k) {
                Response r;
                {
                    py::gil_scoped_release release;
                    r = e.handle_recommend(term, k);
                }
                return py::make_tuple(r.status, r.body.dump());
            },
            py::arg("term"), py::arg("k") = 4)
        .def("save", [](const Engine& e, const std::filesystem::path& dir) { save_snapshot(dir, *e.snapshot()); },
             py::arg("index_dir"));
}
