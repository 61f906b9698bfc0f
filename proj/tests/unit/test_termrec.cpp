#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "oracles.hpp"
#include "scirank/error.hpp"
#include "scirank/termrec.hpp"

#include <set>
#include <sstream>

using namespace scirank;

namespace {

BibRecord doc(std::string id, std::string title, std::vector<std::string> controlled) {
    BibRecord r;
    r.id = std::move(id);
    r.title = std::move(title);
    r.controlled_terms = std::move(controlled);
    return r;
}

// "net" on docs 1 and 2, descriptor "networks" on docs 1 and 2 only.
Corpus net_fixture() {
    return Corpus({doc("1", "net analysis", {"networks"}), doc("2", "net data", {"networks"}),
                   doc("3", "survey methods", {"Methode"}), doc("4", "market study", {"Markt"})});
}

std::vector<oracle::Doc> oracle_docs(const Corpus& corpus) {
    std::vector<oracle::Doc> docs;
    for (const auto& r : corpus) {
        oracle::Doc d;
        for (auto& t : tokenize(r.title)) {
            d.free.insert(t);
        }
        if (r.abstract) {
            for (auto& t : tokenize(*r.abstract)) {
                d.free.insert(t);
            }
        }
        d.controlled.insert(r.controlled_terms.begin(), r.controlled_terms.end());
        docs.push_back(std::move(d));
    }
    return docs;
}

} // namespace

TEST_CASE("log likelihood ratio conventions", "[termrec]") {
    // perfect association: cells 2,0,0,2 -> 8 ln 2
    CHECK(log_likelihood_ratio({2, 2, 2, 4}) == Catch::Approx(8.0 * std::log(2.0)).epsilon(1e-12));
    // anti association and independence clamp to 0
    CHECK(log_likelihood_ratio({0, 2, 2, 4}) == 0.0);
    CHECK(log_likelihood_ratio({1, 2, 2, 4}) == 0.0);
    CHECK(log_likelihood_ratio({0, 0, 0, 0}) == 0.0);
}

TEST_CASE("G2 is symmetric in the two margins", "[termrec][property]") {
    std::mt19937 rng(31);
    std::uniform_int_distribution<std::uint64_t> nd(1, 60);
    for (int iter = 0; iter < 500; ++iter) {
        const auto n = nd(rng);
        std::uniform_int_distribution<std::uint64_t> md(0, n);
        const auto r1 = md(rng);
        const auto c1 = md(rng);
        const auto lo = r1 + c1 > n ? r1 + c1 - n : 0;
        std::uniform_int_distribution<std::uint64_t> cell(lo, std::min(r1, c1));
        const auto n11 = cell(rng);
        REQUIRE(log_likelihood_ratio({n11, r1, c1, n}) == Catch::Approx(log_likelihood_ratio({n11, c1, r1, n})).margin(1e-12));
    }
}

TEST_CASE("train_str on the net fixture", "[termrec]") {
    auto model = train_str(net_fixture());
    const auto expected = oracle::g2(oracle::contingency(oracle_docs(net_fixture()), "net", "networks"));
    auto recs = recommend(model, "net", 1);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].term == "networks");
    CHECK(std::abs(recs[0].score - expected) <= 1e-9);
    const auto& stored = model.associations("net");
    REQUIRE(stored.size() == 1);
    CHECK(stored[0].table == Contingency{2, 2, 2, 4});
}

TEST_CASE("train_str edge cases", "[termrec]") {
    SECTION("free term that never co-occurs with a descriptor") {
        auto model = train_str(Corpus({doc("1", "lonely word", {}), doc("2", "lonely again", {}),
                                       doc("3", "other", {"T"})}));
        CHECK(recommend(model, "lonely", 5).empty());
    }
    SECTION("perfect anti-association scores 0") {
        auto model = train_str(Corpus({doc("1", "f", {}), doc("2", "f", {}), doc("3", "g", {"c"}),
                                       doc("4", "g", {"c"})}));
        CHECK(recommend(model, "f", 5).empty());
        CHECK(!recommend(model, "g", 5).empty());
    }
    SECTION("min_df filter") {
        auto corpus = Corpus({doc("1", "rare net", {"networks"}), doc("2", "net", {"networks"}),
                              doc("3", "x", {"other"})});
        CHECK(train_str(corpus).associations("rare").empty());
        CHECK(!train_str(corpus, TrainOptions{1}).associations("rare").empty());
    }
    SECTION("no controlled terms at all") {
        CHECK_THROWS_AS(train_str(Corpus({doc("1", "a", {})})), InvalidArgument);
        CHECK_THROWS_AS(train_str(Corpus{}), InvalidArgument);
    }
}

TEST_CASE("recommend", "[termrec]") {
    auto model = train_str(net_fixture());
    CHECK(recommend(model, "unknown", 3).empty());
    CHECK_THROWS_AS(recommend(model, "net", 0), InvalidArgument);
}

TEST_CASE("expand_query", "[termrec]") {
    SECTION("net fixture adds networks") {
        auto model = train_str(net_fixture());
        auto eq = expand_query(model, Query{{"net"}}, 1);
        REQUIRE(eq.added_terms.size() == 1);
        CHECK(eq.added_terms[0].term == "networks");
        CHECK(eq.combined().terms == std::vector<std::string>{"net", "networks"});
    }
    SECTION("no associations leaves the query unchanged") {
        AssociationModel empty;
        auto eq = expand_query(empty, Query{{"net"}}, 4);
        CHECK(eq.added_terms.empty());
        CHECK(eq.combined() == Query{{"net"}});
        auto c = net_fixture();
        auto idx = build_index(c);
        CHECK(search_all(idx, eq.combined()) == search_all(idx, Query{{"net"}}));
    }
    SECTION("descriptor already covered by the query is skipped") {
        auto model = train_str(Corpus({doc("1", "luhmann", {"Luhmann"}), doc("2", "luhmann", {"Luhmann"}),
                                       doc("3", "x", {"Other"})}));
        CHECK(expand_query(model, Query{{"luhmann"}}, 4).added_terms.empty());
    }
    SECTION("multi-word descriptors become several tokens; merge keeps max score") {
        auto corpus = Corpus({doc("1", "alpha beta", {"Soziale Systeme", "Theorie"}),
                              doc("2", "alpha beta", {"Soziale Systeme"}), doc("3", "beta", {"Theorie"}),
                              doc("4", "gamma", {"Methode"}), doc("5", "gamma", {"Methode"})});
        auto model = train_str(corpus);
        auto eq = expand_query(model, Query{{"alpha", "beta"}}, 4);
        std::set<std::string> added;
        for (const auto& t : eq.added_terms) {
            added.insert(t.term);
        }
        CHECK(added.count("Soziale Systeme") == 1);
        auto terms = eq.combined().terms;
        CHECK(std::find(terms.begin(), terms.end(), "soziale") != terms.end());
        CHECK(std::find(terms.begin(), terms.end(), "systeme") != terms.end());
        const auto alpha = recommend(model, "alpha", 4);
        const auto beta = recommend(model, "beta", 4);
        for (const auto& t : eq.added_terms) {
            double best = 0.0;
            for (const auto& r : alpha) {
                if (r.term == t.term) best = std::max(best, r.score);
            }
            for (const auto& r : beta) {
                if (r.term == t.term) best = std::max(best, r.score);
            }
            CHECK(t.score == best);
        }
    }
    SECTION("k bounds the added terms") {
        std::mt19937 rng(32);
        auto corpus = gen::random_corpus(rng, 80);
        auto model = train_str(corpus);
        for (std::size_t k = 0; k < 6; ++k) {
            auto eq = expand_query(model, Query{{"net", "theory", "risk"}}, k);
            CHECK(eq.added_terms.size() <= k);
            for (std::size_t i = 1; i < eq.added_terms.size(); ++i) {
                CHECK(eq.added_terms[i - 1].score >= eq.added_terms[i].score);
            }
        }
    }
}

TEST_CASE("stored scores match the contingency oracle", "[termrec][property]") {
    std::mt19937 rng(33);
    for (int iter = 0; iter < 40; ++iter) {
        auto corpus = gen::random_corpus(rng, 5 + iter * 2);
        auto model = train_str(corpus);
        auto docs = oracle_docs(corpus);
        for (const auto& [term, list] : model.all()) {
            for (std::size_t i = 0; i < list.size(); ++i) {
                const auto& a = list[i];
                auto t = oracle::contingency(docs, term, a.controlled_term);
                REQUIRE(a.table.n11 == static_cast<std::uint64_t>(t.a));
                REQUIRE(a.table.n1x == static_cast<std::uint64_t>(t.a + t.b));
                REQUIRE(a.table.nx1 == static_cast<std::uint64_t>(t.a + t.c));
                REQUIRE(a.table.n == docs.size());
                REQUIRE(a.table.n11 <= std::min(a.table.n1x, a.table.nx1));
                REQUIRE(std::abs(a.score - oracle::g2(t)) <= 1e-9);
                if (i > 0) {
                    const auto& p = list[i - 1];
                    REQUIRE((p.score > a.score || (p.score == a.score && p.controlled_term < a.controlled_term)));
                }
            }
        }
    }
}

TEST_CASE("model file round trip", "[termrec]") {
    std::mt19937 rng(34);
    auto model = train_str(gen::random_corpus(rng, 60));
    std::stringstream buf;
    write_model(buf, model);
    auto again = read_model(buf);
    CHECK(again == model);

    std::istringstream bad("net\tnetworks\t2\t2\n");
    CHECK_THROWS_AS(read_model(bad), ParseError);
}
