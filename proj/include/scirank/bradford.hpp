#pragma once

#include "scirank/corpus.hpp"
#include "scirank/index.hpp"

#include <array>
#include <string>
#include <vector>

namespace scirank {

struct JournalCount {
    std::string journal;
    std::size_t count = 0;

    friend bool operator==(const JournalCount&, const JournalCount&) = default;
};

/// Per-journal document counts over a result set, count-descending then
/// name-ascending.
struct JournalTally {
    std::vector<JournalCount> journals;
    std::size_t total_journal_docs = 0;
    std::size_t non_journal_docs = 0;

    bool empty() const noexcept { return journals.empty(); }
    /// 0 for unknown journals.
    std::size_t count_of(const std::string& journal) const;

    friend bool operator==(const JournalTally&, const JournalTally&) = default;
};

struct BradfordZone {
    std::vector<JournalCount> journals;
    std::size_t documents = 0;

    friend bool operator==(const BradfordZone&, const BradfordZone&) = default;
};

/// Core, second and third zone, in tally order.
struct BradfordZones {
    std::array<BradfordZone, 3> zones;

    const BradfordZone& core() const noexcept { return zones[0]; }

    friend bool operator==(const BradfordZones&, const BradfordZones&) = default;
};

/// Counts every entry of `results`; throws UnknownDocument for ids missing
/// from the corpus.
JournalTally tally_journals(const RankedList& results, const Corpus& corpus);

/// Greedy split into three zones targeting ceil(total/3) documents each; a
/// journal that crosses a boundary stays in the earlier zone. Throws
/// InvalidArgument for an empty tally.
BradfordZones bradford_zones(const JournalTally& tally);

/// Stable re-sort by (journal count desc, input rank asc). Output scores are
/// journal counts; documents without a journal get 0.
RankedList bradfordize(const RankedList& results, const Corpus& corpus);

} // namespace scirank
