#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "oracles.hpp"
#include "scirank/bradford.hpp"
#include "scirank/error.hpp"

using namespace scirank;

namespace {

BibRecord in_journal(std::string id, std::optional<std::string> journal) {
    BibRecord r;
    r.id = std::move(id);
    r.title = "t";
    r.journal = std::move(journal);
    return r;
}

RankedList list_of(const std::vector<std::string>& ids) {
    RankedList l;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        l.entries.push_back(RankedEntry{ids[i], 1.0 / static_cast<double>(i + 1), i + 1});
    }
    l.total_hits = ids.size();
    return l;
}

JournalTally tally_of(const std::vector<std::size_t>& counts) {
    JournalTally t;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        t.journals.push_back(JournalCount{"J" + std::to_string(i + 1), counts[i]});
        t.total_journal_docs += counts[i];
    }
    return t;
}

std::vector<std::string> ids_of(const RankedList& l) {
    std::vector<std::string> out;
    for (const auto& e : l.entries) {
        out.push_back(e.doc_id);
    }
    return out;
}

} // namespace

TEST_CASE("tally_journals", "[bradford]") {
    SECTION("empty result list") {
        CHECK(tally_journals(RankedList{}, Corpus{}).empty());
    }
    SECTION("direct counting") {
        std::vector<BibRecord> recs;
        std::vector<std::string> ids;
        auto add = [&](const std::string& j, int n) {
            for (int i = 0; i < n; ++i) {
                ids.push_back(j + "-" + std::to_string(i));
                recs.push_back(in_journal(ids.back(), j));
            }
        };
        add("J4", 1);
        add("J2", 3);
        add("J1", 4);
        add("J3", 1);
        recs.push_back(in_journal("mono", std::nullopt));
        ids.push_back("mono");
        auto t = tally_journals(list_of(ids), Corpus(recs));
        CHECK(t.journals == std::vector<JournalCount>{{"J1", 4}, {"J2", 3}, {"J3", 1}, {"J4", 1}});
        CHECK(t.total_journal_docs == 9);
        CHECK(t.non_journal_docs == 1);
    }
    SECTION("unresolvable id") {
        CHECK_THROWS_AS(tally_journals(list_of({"ghost"}), Corpus{}), UnknownDocument);
    }
}

TEST_CASE("bradford_zones examples", "[bradford]") {
    SECTION("greedy split with straddling journal") {
        auto z = bradford_zones(tally_of({4, 3, 1, 1}));
        REQUIRE(z.zones[0].journals.size() == 1);
        CHECK(z.zones[0].journals[0].journal == "J1");
        REQUIRE(z.zones[1].journals.size() == 1);
        CHECK(z.zones[1].journals[0].journal == "J2");
        REQUIRE(z.zones[2].journals.size() == 2);
        CHECK(z.zones[2].documents == 2);
    }
    SECTION("single journal") {
        auto z = bradford_zones(tally_of({5}));
        CHECK(z.core().journals.size() == 1);
        CHECK(z.zones[1].journals.empty());
        CHECK(z.zones[2].journals.empty());
    }
    SECTION("exact thirds") {
        auto z = bradford_zones(tally_of({1, 1, 1}));
        for (const auto& zone : z.zones) {
            CHECK(zone.journals.size() == 1);
        }
    }
    SECTION("empty tally") {
        CHECK_THROWS_AS(bradford_zones(JournalTally{}), InvalidArgument);
    }
}

TEST_CASE("bradford zones match exhaustive boundary search", "[bradford][property]") {
    std::mt19937 rng(41);
    std::uniform_int_distribution<std::size_t> len(1, 12);
    std::uniform_int_distribution<std::size_t> cnt(1, 30);
    for (int iter = 0; iter < 500; ++iter) {
        std::vector<std::size_t> counts(len(rng));
        for (auto& c : counts) {
            c = cnt(rng);
        }
        std::sort(counts.rbegin(), counts.rend());
        auto tally = tally_of(counts);
        auto z = bradford_zones(tally);

        // concatenation reproduces the tally
        std::vector<JournalCount> concat;
        for (const auto& zone : z.zones) {
            std::size_t docs = 0;
            for (const auto& j : zone.journals) {
                concat.push_back(j);
                docs += j.count;
            }
            REQUIRE(docs == zone.documents);
        }
        REQUIRE(concat == tally.journals);

        const auto cuts = oracle::bradford_cuts(counts);
        REQUIRE(z.zones[0].journals.size() == cuts.core_end);
        REQUIRE(z.zones[1].journals.size() == cuts.zone2_end - cuts.core_end);

        // the core is the closest-to-target prefix among those reaching it
        const std::size_t target = (tally.total_journal_docs + 2) / 3;
        std::size_t best = std::numeric_limits<std::size_t>::max();
        std::size_t prefix = 0;
        for (auto c : counts) {
            prefix += c;
            if (prefix >= target) {
                best = std::min(best, prefix - target);
            }
        }
        REQUIRE(z.core().documents - target == best);
    }
}

TEST_CASE("bradfordize examples", "[bradford]") {
    SECTION("single journal keeps baseline order") {
        Corpus c({in_journal("a", "J"), in_journal("b", "J"), in_journal("c", "J")});
        auto out = bradfordize(list_of({"c", "a", "b"}), c);
        CHECK(ids_of(out) == std::vector<std::string>{"c", "a", "b"});
        CHECK(out.provenance == Provenance::bradford);
    }
    SECTION("core journal documents first") {
        Corpus c({in_journal("a", "J2"), in_journal("b", "J1"), in_journal("cc", "J1")});
        auto out = bradfordize(list_of({"a", "b", "cc"}), c);
        CHECK(ids_of(out) == std::vector<std::string>{"b", "cc", "a"});
        CHECK(out.entries[0].score == 2.0);
        CHECK(out.entries[2].score == 1.0);
        CHECK(out.entries[2].rank == 3);
    }
    SECTION("journal document beats non-journal document") {
        Corpus c({in_journal("mono", std::nullopt), in_journal("art", "J")});
        auto out = bradfordize(list_of({"mono", "art"}), c);
        CHECK(ids_of(out) == std::vector<std::string>{"art", "mono"});
        CHECK(out.entries[1].score == 0.0);
    }
}

TEST_CASE("bradfordize permutation and stability", "[bradford][property]") {
    std::mt19937 rng(42);
    for (int iter = 0; iter < 200; ++iter) {
        auto corpus = gen::random_corpus(rng, 1 + iter % 40);
        auto q = gen::random_query(rng);
        auto baseline = search_all(build_index(corpus), q);
        if (baseline.entries.empty()) {
            continue;
        }
        auto out = bradfordize(baseline, corpus);
        auto a = ids_of(baseline);
        auto b = ids_of(out);
        REQUIRE(std::is_permutation(a.begin(), a.end(), b.begin(), b.end()));
        REQUIRE(out.total_hits == baseline.total_hits);
        std::map<std::string, std::size_t> base_rank;
        for (const auto& e : baseline.entries) {
            base_rank[e.doc_id] = e.rank;
        }
        for (std::size_t i = 1; i < out.entries.size(); ++i) {
            REQUIRE(out.entries[i - 1].score >= out.entries[i].score);
            if (out.entries[i - 1].score == out.entries[i].score) {
                REQUIRE(base_rank[out.entries[i - 1].doc_id] < base_rank[out.entries[i].doc_id]);
            }
        }
    }
}
