#include "scirank/termrec.hpp"

#include "scirank/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace scirank {

namespace {

const std::vector<Association> kNoAssociations;

double xlogx_over(double observed, double expected) {
    return observed > 0.0 ? observed * std::log(observed / expected) : 0.0;
}

bool ranks_before(const Association& a, const Association& b) {
    if (a.score != b.score) {
        return a.score > b.score;
    }
    return a.controlled_term < b.controlled_term;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

double log_likelihood_ratio(const Contingency& t) {
    if (t.n == 0 || t.n11 * t.n <= t.n1x * t.nx1) {
        return 0.0;
    }
    const double n = static_cast<double>(t.n);
    const double row1 = static_cast<double>(t.n1x);
    const double row2 = n - row1;
    const double col1 = static_cast<double>(t.nx1);
    const double col2 = n - col1;
    const double o11 = static_cast<double>(t.n11);
    const double o12 = row1 - o11;
    const double o21 = col1 - o11;
    const double o22 = n - row1 - col1 + o11;
    const double sum = xlogx_over(o11, row1 * col1 / n) + xlogx_over(o12, row1 * col2 / n) +
                       xlogx_over(o21, row2 * col1 / n) + xlogx_over(o22, row2 * col2 / n);
    return std::max(0.0, 2.0 * sum);
}

AssociationModel::AssociationModel(std::map<std::string, std::vector<Association>, std::less<>> by_term)
    : by_term_(std::move(by_term)) {
    for (auto& [term, list] : by_term_) {
        std::sort(list.begin(), list.end(), ranks_before);
    }
}

const std::vector<Association>& AssociationModel::associations(std::string_view term) const {
    auto it = by_term_.find(term);
    return it == by_term_.end() ? kNoAssociations : it->second;
}

std::size_t AssociationModel::pair_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [term, list] : by_term_) {
        n += list.size();
    }
    return n;
}

AssociationModel train_str(const Corpus& corpus, TrainOptions options) {
    std::unordered_map<std::string, std::uint64_t> free_df;
    std::unordered_map<std::string, std::uint64_t> ctrl_df;
    std::unordered_map<std::string, std::unordered_map<std::string, std::uint64_t>> co;
    std::uint64_t assignments = 0;

    for (const auto& rec : corpus) {
        std::set<std::string> free;
        for (auto& tok : tokenize(rec.title)) {
            free.insert(std::move(tok));
        }
        if (rec.abstract) {
            for (auto& tok : tokenize(*rec.abstract)) {
                free.insert(std::move(tok));
            }
        }
        for (const auto& c : rec.controlled_terms) {
            ++ctrl_df[c];
        }
        assignments += rec.controlled_terms.size();
        for (const auto& f : free) {
            ++free_df[f];
            if (!rec.controlled_terms.empty()) {
                auto& row = co[f];
                for (const auto& c : rec.controlled_terms) {
                    ++row[c];
                }
            }
        }
    }
    if (assignments == 0) {
        throw InvalidArgument("term recommender needs at least one controlled-term assignment");
    }

    const auto n = static_cast<std::uint64_t>(corpus.size());
    std::map<std::string, std::vector<Association>, std::less<>> by_term;
    for (const auto& [f, df] : free_df) {
        if (df < options.min_df) {
            continue;
        }
        auto it = co.find(f);
        if (it == co.end()) {
            continue;
        }
        auto& list = by_term[f];
        for (const auto& [c, n11] : it->second) {
            Contingency table{n11, df, ctrl_df.at(c), n};
            list.push_back(Association{c, log_likelihood_ratio(table), table});
        }
    }
    return AssociationModel(std::move(by_term));
}

std::vector<TermScore> recommend(const AssociationModel& model, std::string_view term, std::size_t k) {
    if (k < 1) {
        throw InvalidArgument("recommend requires k >= 1");
    }
    std::vector<TermScore> out;
    for (const auto& a : model.associations(term)) {
        if (out.size() == k || a.score <= 0.0) {
            break;
        }
        out.push_back(TermScore{a.controlled_term, a.score});
    }
    return out;
}

Query ExpandedQuery::combined() const {
    Query q{original_terms};
    std::unordered_set<std::string> present(original_terms.begin(), original_terms.end());
    for (const auto& added : added_terms) {
        for (auto& tok : tokenize(added.term)) {
            if (present.insert(tok).second) {
                q.terms.push_back(std::move(tok));
            }
        }
    }
    return q;
}

ExpandedQuery expand_query(const AssociationModel& model, const Query& query, std::size_t k) {
    ExpandedQuery out;
    out.original_terms = query.terms;
    if (k == 0) {
        return out;
    }
    const std::unordered_set<std::string> original(query.terms.begin(), query.terms.end());
    std::map<std::string, double> best;
    for (const auto& term : query.terms) {
        for (auto& rec : recommend(model, term, k)) {
            const auto toks = tokenize(rec.term);
            const bool adds_nothing =
                std::all_of(toks.begin(), toks.end(), [&](const std::string& t) { return original.count(t) > 0; });
            if (adds_nothing) {
                continue;
            }
            auto [it, inserted] = best.emplace(rec.term, rec.score);
            if (!inserted) {
                it->second = std::max(it->second, rec.score);
            }
        }
    }
    for (auto& [term, score] : best) {
        out.added_terms.push_back(TermScore{term, score});
    }
    std::stable_sort(out.added_terms.begin(), out.added_terms.end(),
                     [](const TermScore& a, const TermScore& b) { return a.score > b.score; });
    if (out.added_terms.size() > k) {
        out.added_terms.resize(k);
    }
    return out;
}

void write_model(std::ostream& out, const AssociationModel& model) {
    for (const auto& [term, list] : model.all()) {
        for (const auto& a : list) {
            out << term << '\t' << a.controlled_term << '\t' << a.table.n11 << '\t' << a.table.n1x << '\t'
                << a.table.nx1 << '\t' << a.table.n << '\t' << format_double(a.score) << '\n';
        }
    }
}

AssociationModel read_model(std::istream& in) {
    std::map<std::string, std::vector<Association>, std::less<>> by_term;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> f;
        std::string_view rest = line;
        for (std::size_t pos; (pos = rest.find('\t')) != std::string_view::npos;) {
            f.push_back(rest.substr(0, pos));
            rest = rest.substr(pos + 1);
        }
        f.push_back(rest);
        auto bad = [&] { return ParseError("model line " + std::to_string(line_no) + ": malformed", line_no); };
        if (f.size() != 7) {
            throw bad();
        }
        auto num = [&](std::string_view s, auto& value) {
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
            if (ec != std::errc{} || ptr != s.data() + s.size()) {
                throw bad();
            }
        };
        Association a;
        a.controlled_term = std::string(f[1]);
        num(f[2], a.table.n11);
        num(f[3], a.table.n1x);
        num(f[4], a.table.nx1);
        num(f[5], a.table.n);
        num(f[6], a.score);
        by_term[std::string(f[0])].push_back(std::move(a));
    }
    return AssociationModel(std::move(by_term));
}

void save_model(const std::filesystem::path& path, const AssociationModel& model) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write model file: " + path.string());
    }
    write_model(out, model);
}

AssociationModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot read model file: " + path.string(), 0);
    }
    return read_model(in);
}

} // namespace scirank
