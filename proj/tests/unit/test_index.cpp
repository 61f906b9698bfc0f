#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "scirank/error.hpp"
#include "scirank/index.hpp"

#include <cmath>
#include <set>
#include <sstream>

using namespace scirank;

namespace {

BibRecord doc(std::string id, std::string title, std::optional<std::string> abstract = std::nullopt) {
    BibRecord r;
    r.id = std::move(id);
    r.title = std::move(title);
    r.abstract = std::move(abstract);
    return r;
}

std::string serialize(const RankedList& l) {
    std::ostringstream s;
    s.precision(17);
    s << to_string(l.provenance) << ' ' << l.total_hits << '\n';
    for (const auto& e : l.entries) {
        s << e.rank << ' ' << e.doc_id << ' ' << e.score << '\n';
    }
    return s.str();
}

} // namespace

TEST_CASE("build_index examples", "[index]") {
    SECTION("empty corpus") {
        auto idx = build_index(Corpus{});
        CHECK(idx.doc_count() == 0);
        CHECK(idx.term_count() == 0);
    }
    SECTION("one doc") {
        auto idx = build_index(Corpus({doc("d1", "systems theory")}));
        CHECK(idx.df("systems") == 1);
        CHECK(idx.df("theory") == 1);
        CHECK(idx.docs()[0].length == 2);
    }
    SECTION("two docs sharing a token") {
        auto idx = build_index(Corpus({doc("d1", "systems theory"), doc("d2", "theory of media")}));
        CHECK(idx.df("theory") == 2);
        const auto& p = idx.postings("theory");
        REQUIRE(p.size() == 2);
        CHECK(idx.docs()[p[0].doc].id == "d1");
        CHECK(idx.docs()[p[1].doc].id == "d2");
    }
    SECTION("controlled terms and abstract are indexed") {
        auto r = doc("d1", "title", "abstract words");
        r.controlled_terms = {"Soziale Systeme"};
        auto idx = build_index(Corpus({r}));
        CHECK(idx.df("abstract") == 1);
        CHECK(idx.df("soziale") == 1);
        CHECK(idx.docs()[0].length == 5);
    }
}

TEST_CASE("search examples", "[index][search]") {
    SECTION("single doc containing the sole query term") {
        auto idx = build_index(Corpus({doc("d1", "luhmann")}));
        auto r = search(idx, Query{{"luhmann"}}, 10);
        REQUIRE(r.entries.size() == 1);
        CHECK(r.entries[0].doc_id == "d1");
        CHECK(r.entries[0].rank == 1);
        CHECK(r.total_hits == 1);
        CHECK(r.provenance == Provenance::baseline);
    }
    SECTION("absent term") {
        auto idx = build_index(Corpus({doc("d1", "luhmann")}));
        auto r = search(idx, Query{{"habermas"}}, 10);
        CHECK(r.entries.empty());
        CHECK(r.total_hits == 0);
    }
    SECTION("exact tie is broken by doc id") {
        // d1: tf(x)=4, len 4; d2: tf(x)=1, len 1; d3 has no x.
        auto idx = build_index(Corpus({doc("d2", "x"), doc("d3", "y z"), doc("d1", "x x x x")}));
        auto r = search(idx, Query{{"x"}}, 10);
        REQUIRE(r.entries.size() == 2);
        const double idf = 1.0 + std::log(3.0 / 3.0);
        CHECK(r.entries[0].doc_id == "d1");
        CHECK(r.entries[1].doc_id == "d2");
        CHECK(r.entries[0].score == r.entries[1].score);
        CHECK(r.entries[0].score == Catch::Approx(idf * idf));
        CHECK(r.total_hits == 2);
    }
    SECTION("coord factor rewards matching more query terms") {
        auto idx = build_index(Corpus({doc("a", "alpha beta"), doc("b", "alpha gamma"), doc("c", "delta")}));
        auto r = search(idx, Query{{"alpha", "beta"}}, 10);
        REQUIRE(r.entries.size() == 2);
        CHECK(r.entries[0].doc_id == "a");
        // explicit formula for doc b: coord 1/2, tf 1, len 2
        const double idf_alpha = 1.0 + std::log(3.0 / 3.0);
        CHECK(r.entries[1].score == Catch::Approx(0.5 * idf_alpha * idf_alpha / std::sqrt(2.0)));
    }
    SECTION("k truncates entries but not total_hits") {
        auto idx = build_index(Corpus({doc("a", "x"), doc("b", "x y"), doc("c", "x y z")}));
        auto r = search(idx, Query{{"x"}}, 2);
        CHECK(r.entries.size() == 2);
        CHECK(r.total_hits == 3);
    }
    SECTION("errors") {
        auto idx = build_index(Corpus({doc("a", "x")}));
        CHECK_THROWS_AS(search(idx, Query{}, 10), InvalidArgument);
        CHECK_THROWS_AS(search(idx, Query{{"x"}}, 0), InvalidArgument);
    }
    SECTION("require_abstract filters records without abstract") {
        auto idx = build_index(Corpus({doc("a", "x", "has text"), doc("b", "x"), doc("c", "x", "")}));
        auto r = search_all(idx, Query{{"x"}}, SearchOptions{true});
        REQUIRE(r.total_hits == 1);
        CHECK(r.entries[0].doc_id == "a");
    }
}

TEST_CASE("index invariants on random corpora", "[index][property]") {
    std::mt19937 rng(21);
    for (int iter = 0; iter < 60; ++iter) {
        auto corpus = gen::random_corpus(rng, 1 + iter % 50);
        auto idx = build_index(corpus);
        std::vector<std::uint64_t> tf_sum(idx.doc_count(), 0);
        for (const auto& [term, plist] : idx.all_postings()) {
            std::set<std::uint32_t> distinct;
            for (const auto& p : plist) {
                distinct.insert(p.doc);
                REQUIRE(p.doc < idx.doc_count());
                tf_sum[p.doc] += p.tf;
            }
            REQUIRE(distinct.size() == idx.df(term));
        }
        for (std::size_t d = 0; d < idx.doc_count(); ++d) {
            REQUIRE(tf_sum[d] <= idx.docs()[d].length);
        }
    }
}

TEST_CASE("total_hits equals brute-force union of matching docs", "[index][property]") {
    std::mt19937 rng(22);
    for (int iter = 0; iter < 100; ++iter) {
        auto corpus = gen::random_corpus(rng, 1 + iter % 50);
        auto idx = build_index(corpus);
        auto q = gen::random_query(rng);
        std::set<std::string> expected;
        for (const auto& r : corpus) {
            std::vector<std::string> toks = tokenize(r.title);
            if (r.abstract) {
                auto a = tokenize(*r.abstract);
                toks.insert(toks.end(), a.begin(), a.end());
            }
            for (const auto& c : r.controlled_terms) {
                auto t = tokenize(c);
                toks.insert(toks.end(), t.begin(), t.end());
            }
            for (const auto& qt : q.terms) {
                if (std::find(toks.begin(), toks.end(), qt) != toks.end()) {
                    expected.insert(r.id);
                }
            }
        }
        auto res = search_all(idx, q);
        REQUIRE(res.total_hits == expected.size());
        std::set<std::string> got;
        for (std::size_t i = 0; i < res.entries.size(); ++i) {
            got.insert(res.entries[i].doc_id);
            REQUIRE(res.entries[i].rank == i + 1);
            REQUIRE(res.entries[i].score >= 0.0);
            if (i > 0) {
                const auto& prev = res.entries[i - 1];
                const auto& cur = res.entries[i];
                REQUIRE((prev.score > cur.score || (prev.score == cur.score && prev.doc_id < cur.doc_id)));
            }
        }
        REQUIRE(got == expected);
    }
}

TEST_CASE("adding a query-term occurrence never lowers the score", "[index][property]") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> tfd(1, 5);
    for (int iter = 0; iter < 200; ++iter) {
        // Same doc length before and after: replace a filler token with x.
        const int tf = tfd(rng);
        const int filler = tfd(rng);
        auto make = [&](int xs, int fill) {
            std::string title;
            for (int i = 0; i < xs; ++i) {
                title += "x ";
            }
            for (int i = 0; i < fill; ++i) {
                title += "filler ";
            }
            return Corpus({doc("target", title), doc("other", "x y"), doc("third", "z")});
        };
        auto before = search_all(build_index(make(tf, filler)), Query{{"x", "y"}});
        auto after = search_all(build_index(make(tf + 1, filler - 1)), Query{{"x", "y"}});
        auto score_of = [](const RankedList& l) {
            for (const auto& e : l.entries) {
                if (e.doc_id == "target") {
                    return e.score;
                }
            }
            return 0.0;
        };
        REQUIRE(score_of(after) >= score_of(before));
    }
}

TEST_CASE("search is deterministic", "[index][property]") {
    std::mt19937 rng(24);
    for (int iter = 0; iter < 20; ++iter) {
        auto corpus = gen::random_corpus(rng, 40);
        auto q = gen::random_query(rng);
        auto a = serialize(search(build_index(corpus), q, 10));
        auto b = serialize(search(build_index(corpus), q, 10));
        REQUIRE(a == b);
    }
}

TEST_CASE("index persistence round trip", "[index]") {
    std::mt19937 rng(25);
    auto corpus = gen::random_corpus(rng, 30);
    auto idx = build_index(corpus);
    std::stringstream buf;
    write_index(buf, idx);
    auto again = read_index(buf);
    CHECK(again == idx);

    std::istringstream bad("N\t1\nT\tword\t5:1\n");
    CHECK_THROWS_AS(read_index(bad), ParseError);
}
