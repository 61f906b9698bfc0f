#pragma once

// Seeded random fixtures for property-style tests.

#include "scirank/corpus.hpp"
#include "scirank/index.hpp"

#include <random>
#include <string>
#include <vector>

namespace gen {

inline std::string pick(std::mt19937& rng, const std::vector<std::string>& pool) {
    std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
    return pool[d(rng)];
}

inline const std::vector<std::string>& free_vocab() {
    static const std::vector<std::string> v{"net",     "theory", "system", "social", "market", "risk",
                                            "luhmann", "law",    "media",  "labour", "trust",  "class"};
    return v;
}

inline const std::vector<std::string>& controlled_vocab() {
    static const std::vector<std::string> v{"Systemtheorie", "Autopoiesis",    "Kontingenz",   "Luhmann, N.",
                                            "Arbeitsmarkt", "soziales Netzwerk", "Risiko",      "Vertrauen",
                                            "Medien",       "soziale Klasse"};
    return v;
}

/// Corpus of `size` records over small vocabularies so terms, journals and
/// authors repeat.
inline scirank::Corpus random_corpus(std::mt19937& rng, std::size_t size) {
    static const std::vector<std::string> journals{"J1", "J2", "J3", "J4", "J5"};
    static const std::vector<std::string> authors{"A", "B", "C", "D", "E", "F", "G", "H"};
    std::uniform_int_distribution<int> words(0, 6);
    std::uniform_int_distribution<int> few(0, 3);
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution mostly(0.8);

    std::vector<scirank::BibRecord> records;
    for (std::size_t i = 0; i < size; ++i) {
        scirank::BibRecord r;
        r.id = "d" + std::to_string(i);
        for (int w = 0, n = words(rng); w < n; ++w) {
            r.title += pick(rng, free_vocab()) + " ";
        }
        if (coin(rng)) {
            std::string abs;
            for (int w = 0, n = words(rng); w < n; ++w) {
                abs += pick(rng, free_vocab()) + " ";
            }
            r.abstract = abs;
        }
        if (mostly(rng)) {
            r.journal = pick(rng, journals);
        }
        for (int a = 0, n = few(rng); a < n; ++a) {
            r.authors.push_back(pick(rng, authors));
        }
        for (int c = 0, n = few(rng); c < n; ++c) {
            r.controlled_terms.push_back(pick(rng, controlled_vocab()));
        }
        r.doc_type = "journalarticle";
        records.push_back(std::move(r));
    }
    // Ensure at least one controlled-term assignment.
    if (!records.empty()) {
        records.front().controlled_terms.push_back(controlled_vocab().front());
    }
    return scirank::Corpus(std::move(records));
}

inline scirank::Query random_query(std::mt19937& rng) {
    std::uniform_int_distribution<int> len(1, 3);
    scirank::Query q;
    for (int i = 0, n = len(rng); i < n; ++i) {
        q.terms.push_back(pick(rng, free_vocab()));
    }
    return q;
}

} // namespace gen
