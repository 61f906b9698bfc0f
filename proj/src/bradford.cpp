#include "scirank/bradford.hpp"

#include "scirank/error.hpp"

#include <algorithm>
#include <map>

namespace scirank {

std::size_t JournalTally::count_of(const std::string& journal) const {
    for (const auto& j : journals) {
        if (j.journal == journal) {
            return j.count;
        }
    }
    return 0;
}

JournalTally tally_journals(const RankedList& results, const Corpus& corpus) {
    JournalTally tally;
    std::map<std::string, std::size_t> counts;
    for (const auto& e : results.entries) {
        const auto& rec = corpus.at(e.doc_id);
        if (rec.journal) {
            ++counts[*rec.journal];
            ++tally.total_journal_docs;
        } else {
            ++tally.non_journal_docs;
        }
    }
    tally.journals.reserve(counts.size());
    for (auto& [name, count] : counts) {
        tally.journals.push_back(JournalCount{name, count});
    }
    // counts is name-ordered, so a stable sort on count leaves ties by name.
    std::stable_sort(tally.journals.begin(), tally.journals.end(),
                     [](const JournalCount& a, const JournalCount& b) { return a.count > b.count; });
    return tally;
}

BradfordZones bradford_zones(const JournalTally& tally) {
    if (tally.empty()) {
        throw InvalidArgument("bradford_zones requires a non-empty tally");
    }
    const std::size_t target = (tally.total_journal_docs + 2) / 3;
    BradfordZones out;
    std::size_t zone = 0;
    for (const auto& j : tally.journals) {
        if (out.zones[zone].documents >= target && zone + 1 < out.zones.size()) {
            ++zone;
        }
        out.zones[zone].journals.push_back(j);
        out.zones[zone].documents += j.count;
    }
    return out;
}

RankedList bradfordize(const RankedList& results, const Corpus& corpus) {
    const auto tally = tally_journals(results, corpus);
    std::map<std::string, std::size_t, std::less<>> by_name;
    for (const auto& j : tally.journals) {
        by_name.emplace(j.journal, j.count);
    }

    RankedList out;
    out.query = results.query;
    out.total_hits = results.total_hits;
    out.provenance = Provenance::bradford;
    out.entries.reserve(results.entries.size());
    for (const auto& e : results.entries) {
        const auto& rec = corpus.at(e.doc_id);
        const double count = rec.journal ? static_cast<double>(by_name.at(*rec.journal)) : 0.0;
        out.entries.push_back(RankedEntry{e.doc_id, count, e.rank});
    }
    std::stable_sort(out.entries.begin(), out.entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.rank < b.rank;
    });
    renumber(out);
    return out;
}

} // namespace scirank
