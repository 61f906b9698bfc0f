#include "scirank/evalkit.hpp"

#include "scirank/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace scirank {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

bool skip_line(const std::string& line) {
    auto first = line.find_first_not_of(" \t\r");
    return first == std::string::npos || line[first] == '#';
}

std::string_view strip_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') {
        s.remove_suffix(1);
    }
    return s;
}

std::size_t parse_count(std::string_view s, const char* what, std::size_t line_no) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError(std::string(what) + " line " + std::to_string(line_no) + ": bad count '" + std::string(s) + "'",
                         line_no);
    }
    return v;
}

template <typename F>
void for_each_tsv_line(std::istream& in, const char* what, std::size_t columns, F&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line)) {
            continue;
        }
        auto f = split_tabs(strip_cr(line));
        if (f.size() != columns) {
            throw ParseError(std::string(what) + " line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(columns) + " tab-separated fields",
                             line_no);
        }
        fn(f, line_no);
    }
}

// Numeric topic ids sort numerically, everything else lexicographically after.
bool topic_less(const std::string& a, const std::string& b) {
    auto numeric = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    const bool na = numeric(a);
    const bool nb = numeric(b);
    if (na && nb) {
        if (a.size() != b.size()) {
            return a.size() < b.size();
        }
        return a < b;
    }
    if (na != nb) {
        return na;
    }
    return a < b;
}

std::optional<double> mean_of_defined(const std::vector<std::optional<double>>& values) {
    std::vector<double> defined;
    for (const auto& v : values) {
        if (v) {
            defined.push_back(*v);
        }
    }
    if (defined.empty()) {
        return std::nullopt;
    }
    return macro_average(defined);
}

void fill_averages(EvalReport& report) {
    for (const auto& s : report.services) {
        std::vector<std::optional<double>> column;
        for (const auto& t : report.topics) {
            if (auto it = report.cells.find({t, s}); it != report.cells.end()) {
                column.push_back(it->second.precision);
            }
        }
        report.averages[s] = mean_of_defined(column);
    }
}

CellReport make_cell(const PrecisionCounts& counts) {
    CellReport cell;
    cell.counts = counts;
    cell.precision = counts.precision();
    if (cell.precision) {
        cell.standard_error = standard_error(*cell.precision, counts.judged());
    }
    return cell;
}

template <typename T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end(), topic_less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

JudgmentSet::JudgmentSet(std::vector<Judgment> judgments) : judgments_(std::move(judgments)) {
    std::set<std::tuple<std::string_view, std::string_view, std::string_view>> seen;
    for (const auto& j : judgments_) {
        if (!seen.emplace(j.topic_id, j.doc_id, j.assessor_id).second) {
            throw InvalidArgument("duplicate judgment for topic '" + j.topic_id + "', doc '" + j.doc_id +
                                  "', assessor '" + j.assessor_id + "'");
        }
    }
}

std::vector<std::string> JudgmentSet::topics() const {
    std::vector<std::string> out;
    for (const auto& j : judgments_) {
        out.push_back(j.topic_id);
    }
    sort_unique(out);
    return out;
}

JudgmentSet read_judgments(std::istream& in) {
    std::vector<Judgment> out;
    for_each_tsv_line(in, "judgment", 4, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
        Verdict v;
        if (f[3] == "1") {
            v = Verdict::relevant;
        } else if (f[3] == "0") {
            v = Verdict::not_relevant;
        } else {
            throw ParseError("judgment line " + std::to_string(line_no) + ": verdict must be 1 or 0", line_no);
        }
        out.push_back(Judgment{std::string(f[0]), std::string(f[1]), std::string(f[2]), v});
    });
    return JudgmentSet(std::move(out));
}

JudgmentSet load_judgments(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot read judgments file: " + path.string(), 0);
    }
    return read_judgments(in);
}

void write_judgments(std::ostream& out, const JudgmentSet& judgments) {
    for (const auto& j : judgments.all()) {
        out << j.topic_id << '\t' << j.doc_id << '\t' << j.assessor_id << '\t'
            << (j.verdict == Verdict::relevant ? 1 : 0) << '\n';
    }
}

RunSet read_runs(std::istream& in) {
    std::map<std::string, std::map<std::string, std::vector<std::pair<std::size_t, std::string>>>> ranked;
    for_each_tsv_line(in, "run", 4, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
        ranked[std::string(f[0])][std::string(f[1])].emplace_back(parse_count(f[2], "run", line_no),
                                                                 std::string(f[3]));
    });
    RunSet runs;
    for (auto& [topic, services] : ranked) {
        for (auto& [service, rows] : services) {
            std::stable_sort(rows.begin(), rows.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            auto& docs = runs[topic][service];
            for (auto& [rank, doc] : rows) {
                docs.push_back(std::move(doc));
            }
        }
    }
    return runs;
}

RunSet load_runs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot read runs file: " + path.string(), 0);
    }
    return read_runs(in);
}

void write_runs(std::ostream& out, const RunSet& runs) {
    for (const auto& [topic, services] : runs) {
        for (const auto& [service, docs] : services) {
            for (std::size_t i = 0; i < docs.size(); ++i) {
                out << topic << '\t' << service << '\t' << (i + 1) << '\t' << docs[i] << '\n';
            }
        }
    }
}

std::vector<std::string> build_pool(std::span<const std::vector<std::string>> lists, std::size_t n) {
    if (lists.empty()) {
        throw InvalidArgument("build_pool requires at least one service list");
    }
    if (n < 1) {
        throw InvalidArgument("build_pool requires n >= 1");
    }
    std::vector<std::string> pool;
    std::unordered_set<std::string> seen;
    for (std::size_t depth = 0; depth < n; ++depth) {
        for (const auto& list : lists) {
            if (depth < list.size() && seen.insert(list[depth]).second) {
                pool.push_back(list[depth]);
            }
        }
    }
    return pool;
}

std::vector<std::string> build_pool(std::span<const RankedList> lists, std::size_t n) {
    std::vector<std::vector<std::string>> ids;
    ids.reserve(lists.size());
    for (const auto& list : lists) {
        auto& v = ids.emplace_back();
        for (const auto& e : list.entries) {
            v.push_back(e.doc_id);
        }
    }
    return build_pool(std::span<const std::vector<std::string>>(ids), n);
}

Pool build_pools(const RunSet& runs, std::size_t n) {
    Pool pool;
    for (const auto& [topic, services] : runs) {
        std::vector<std::vector<std::string>> lists;
        for (const auto& [service, docs] : services) {
            lists.push_back(docs);
        }
        pool[topic] = build_pool(std::span<const std::vector<std::string>>(lists), n);
    }
    return pool;
}

std::optional<double> PrecisionCounts::precision() const {
    if (judged() == 0) {
        return std::nullopt;
    }
    return static_cast<double>(relevant) / static_cast<double>(judged());
}

PrecisionCounts precision(const JudgmentSet& judgments, const std::string& topic,
                          const std::set<std::string>& service_top_docs) {
    PrecisionCounts c;
    for (const auto& j : judgments.all()) {
        if (j.topic_id != topic || !service_top_docs.count(j.doc_id)) {
            continue;
        }
        if (j.verdict == Verdict::relevant) {
            ++c.relevant;
        } else {
            ++c.not_relevant;
        }
    }
    return c;
}

double macro_average(std::span<const double> values) {
    if (values.empty()) {
        throw InvalidArgument("macro_average requires at least one value");
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

double standard_error(double proportion, std::size_t n) {
    if (n < 1) {
        throw InvalidArgument("standard_error requires n >= 1");
    }
    if (!(proportion >= 0.0 && proportion <= 1.0)) {
        throw InvalidArgument("standard_error requires a proportion in [0, 1]");
    }
    return std::sqrt(proportion * (1.0 - proportion) / static_cast<double>(n));
}

KappaResult fleiss_kappa_detail(const KappaInput& input) {
    if (input.counts.empty()) {
        throw InvalidArgument("fleiss_kappa requires at least one item");
    }
    const std::size_t categories = input.counts.front().size();
    std::size_t raters = 0;
    for (std::size_t c : input.counts.front()) {
        raters += c;
    }
    if (raters < 2) {
        throw InvalidArgument("fleiss_kappa requires at least 2 raters per item");
    }
    for (const auto& row : input.counts) {
        std::size_t sum = 0;
        for (std::size_t c : row) {
            sum += c;
        }
        if (row.size() != categories || sum != raters) {
            throw InvalidArgument("fleiss_kappa requires the same number of raters for every item");
        }
    }

    KappaResult r;
    r.raters = raters;
    r.items = input.counts.size();
    const double n = static_cast<double>(raters);
    const double items = static_cast<double>(r.items);
    r.category_proportions.assign(categories, 0.0);
    double agreement_sum = 0.0;
    for (const auto& row : input.counts) {
        double squares = 0.0;
        for (std::size_t j = 0; j < categories; ++j) {
            const double c = static_cast<double>(row[j]);
            squares += c * c;
            r.category_proportions[j] += c;
        }
        agreement_sum += (squares - n) / (n * (n - 1.0));
    }
    r.mean_agreement = agreement_sum / items;
    for (auto& p : r.category_proportions) {
        p /= items * n;
        r.expected_agreement += p * p;
    }
    if (r.expected_agreement >= 1.0) {
        // All ratings in one category; observed agreement is then perfect.
        r.kappa = 1.0;
    } else {
        r.kappa = (r.mean_agreement - r.expected_agreement) / (1.0 - r.expected_agreement);
    }
    return r;
}

double fleiss_kappa(const KappaInput& input) { return fleiss_kappa_detail(input).kappa; }

TopicKappa topic_kappa(const JudgmentSet& judgments, const std::string& topic) {
    TopicKappa out;
    out.topic = topic;
    std::set<std::string> assessors;
    std::map<std::string, std::array<std::size_t, 2>> by_doc;
    std::map<std::string, std::size_t> raters_of_doc;
    for (const auto& j : judgments.all()) {
        if (j.topic_id != topic) {
            continue;
        }
        assessors.insert(j.assessor_id);
        ++by_doc[j.doc_id][j.verdict == Verdict::relevant ? 0 : 1];
        ++raters_of_doc[j.doc_id];
    }
    out.assessors = assessors.size();
    out.items_total = by_doc.size();
    KappaInput input;
    for (const auto& [doc, counts] : by_doc) {
        if (raters_of_doc[doc] == assessors.size()) {
            input.counts.push_back({counts[0], counts[1]});
        }
    }
    out.items_used = input.counts.size();
    if (out.assessors >= 2 && !input.counts.empty()) {
        out.kappa = fleiss_kappa(input);
    }
    return out;
}

AgreementStats agreement_rate(const JudgmentSet& judgments) {
    std::map<std::pair<std::string, std::string>, std::array<std::size_t, 2>> cases;
    for (const auto& j : judgments.all()) {
        ++cases[{j.topic_id, j.doc_id}][j.verdict == Verdict::relevant ? 0 : 1];
    }
    AgreementStats out;
    double sum = 0.0;
    for (const auto& [key, c] : cases) {
        const double r = static_cast<double>(c[0]);
        const double nr = static_cast<double>(c[1]);
        const double m = r + nr;
        if (m < 2.0) {
            continue;
        }
        ++out.documents;
        sum += (r * (r - 1.0) + nr * (nr - 1.0)) / (m * (m - 1.0));
        if (c[0] == 0 || c[1] == 0) {
            ++out.perfect_matches;
        }
    }
    if (out.documents > 0) {
        out.pairwise_agreement = sum / static_cast<double>(out.documents);
    }
    return out;
}

std::size_t OverlapReport::between(const std::string& a, const std::string& b) const {
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto it = pairwise.find(key);
    return it == pairwise.end() ? 0 : it->second;
}

OverlapReport overlap(const RelevantSets& sets) {
    std::set<std::string> services;
    for (const auto& [topic, by_service] : sets) {
        for (const auto& [service, docs] : by_service) {
            services.insert(service);
        }
    }
    if (services.size() < 2) {
        throw InvalidArgument("overlap requires at least two services");
    }
    OverlapReport out;
    for (auto a = services.begin(); a != services.end(); ++a) {
        for (auto b = std::next(a); b != services.end(); ++b) {
            out.pairwise[{*a, *b}] = 0;
        }
    }
    for (const auto& [topic, by_service] : sets) {
        for (auto a = by_service.begin(); a != by_service.end(); ++a) {
            for (auto b = std::next(a); b != by_service.end(); ++b) {
                std::size_t common = 0;
                for (const auto& doc : a->second) {
                    common += b->second.count(doc);
                }
                out.pairwise[{a->first, b->first}] += common;
                out.total += common;
            }
        }
    }
    return out;
}

std::vector<CountRow> read_counts(std::istream& in) {
    std::vector<CountRow> rows;
    for_each_tsv_line(in, "counts", 4, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
        rows.push_back(CountRow{std::string(f[0]), std::string(f[1]),
                                PrecisionCounts{parse_count(f[2], "counts", line_no),
                                                parse_count(f[3], "counts", line_no)}});
    });
    return rows;
}

std::vector<CountRow> load_counts(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot read counts file: " + path.string(), 0);
    }
    return read_counts(in);
}

EvalReport report_from_counts(std::span<const CountRow> rows) {
    EvalReport report;
    for (const auto& row : rows) {
        report.topics.push_back(row.topic);
        report.services.push_back(row.service);
        if (!report.cells.emplace(std::make_pair(row.topic, row.service), make_cell(row.counts)).second) {
            throw InvalidArgument("duplicate counts for topic '" + row.topic + "', service '" + row.service + "'");
        }
    }
    sort_unique(report.topics);
    std::sort(report.services.begin(), report.services.end());
    report.services.erase(std::unique(report.services.begin(), report.services.end()), report.services.end());
    fill_averages(report);
    return report;
}

EvalReport evaluate(const JudgmentSet& judgments, const RunSet& runs, EvalOptions options) {
    if (options.top_n < 1) {
        throw InvalidArgument("evaluate requires top_n >= 1");
    }
    EvalReport report;
    std::set<std::string> services;
    RelevantSets relevant_sets;

    // Majority verdict per (topic, doc) for the overlap analysis.
    std::map<std::pair<std::string, std::string>, long> balance;
    for (const auto& j : judgments.all()) {
        balance[{j.topic_id, j.doc_id}] += j.verdict == Verdict::relevant ? 1 : -1;
    }

    for (const auto& [topic, by_service] : runs) {
        report.topics.push_back(topic);
        for (const auto& [service, docs] : by_service) {
            services.insert(service);
            const auto depth = std::min(options.top_n, docs.size());
            std::set<std::string> top(docs.begin(), docs.begin() + static_cast<std::ptrdiff_t>(depth));
            report.cells[{topic, service}] = make_cell(precision(judgments, topic, top));
            auto& rel = relevant_sets[topic][service];
            for (const auto& doc : top) {
                if (auto it = balance.find({topic, doc}); it != balance.end() && it->second > 0) {
                    rel.insert(doc);
                }
            }
        }
    }
    sort_unique(report.topics);
    report.services.assign(services.begin(), services.end());
    fill_averages(report);

    for (const auto& topic : judgments.topics()) {
        report.kappas.push_back(topic_kappa(judgments, topic));
    }
    report.agreement = agreement_rate(judgments);
    if (services.size() >= 2) {
        report.overlap = overlap(relevant_sets);
    }
    return report;
}

void print_report_table(std::ostream& out, const EvalReport& report) {
    const int w = 8;
    out << std::left << std::setw(6) << "id";
    for (const char* group : {"non relevant", "relevant", "precision (in %)"}) {
        out << std::setw(w * static_cast<int>(report.services.size()) + 2) << group;
    }
    out << '\n' << std::setw(6) << "";
    for (int g = 0; g < 3; ++g) {
        for (const auto& s : report.services) {
            out << std::setw(w) << s;
        }
        out << "  ";
    }
    out << '\n';

    auto pct = [](const std::optional<double>& p) {
        if (!p) {
            return std::string("n/a");
        }
        std::ostringstream s;
        s << std::fixed << std::setprecision(2) << (*p * 100.0);
        return s.str();
    };
    for (const auto& t : report.topics) {
        out << std::setw(6) << t;
        for (int g = 0; g < 3; ++g) {
            for (const auto& s : report.services) {
                auto it = report.cells.find({t, s});
                if (it == report.cells.end()) {
                    out << std::setw(w) << "-";
                } else if (g == 0) {
                    out << std::setw(w) << it->second.counts.not_relevant;
                } else if (g == 1) {
                    out << std::setw(w) << it->second.counts.relevant;
                } else {
                    out << std::setw(w) << pct(it->second.precision);
                }
            }
            out << "  ";
        }
        out << '\n';
    }
    out << std::setw(6) << "avg." << std::setw((w * static_cast<int>(report.services.size()) + 2) * 2) << "";
    for (const auto& s : report.services) {
        auto it = report.averages.find(s);
        out << std::setw(w) << pct(it == report.averages.end() ? std::nullopt : it->second);
    }
    out << '\n' << std::right;

    if (!report.kappas.empty()) {
        out << "\nFleiss kappa per topic (items judged by all assessors / items judged):\n";
        for (const auto& k : report.kappas) {
            out << "  " << k.topic << ": ";
            if (k.kappa) {
                out << std::fixed << std::setprecision(4) << *k.kappa << std::defaultfloat;
            } else {
                out << "n/a";
            }
            out << " (" << k.items_used << "/" << k.items_total << ", " << k.assessors << " assessors)\n";
        }
    }
    if (report.agreement) {
        out << "\nAgreement: ";
        if (report.agreement->pairwise_agreement) {
            out << std::fixed << std::setprecision(2) << (*report.agreement->pairwise_agreement * 100.0)
                << std::defaultfloat << "%";
        } else {
            out << "n/a";
        }
        out << ", perfect matches " << report.agreement->perfect_matches << " of " << report.agreement->documents
            << '\n';
    }
    if (report.overlap) {
        out << "\nOverlap of relevant top-n sets:\n";
        for (const auto& [pair, count] : report.overlap->pairwise) {
            out << "  " << pair.first << "-" << pair.second << ": " << count << '\n';
        }
        out << "  total: " << report.overlap->total << '\n';
    }
}

std::string report_to_json(const EvalReport& report) {
    using nlohmann::json;
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json j;
    j["topics"] = report.topics;
    j["services"] = report.services;
    json cells = json::array();
    for (const auto& [key, cell] : report.cells) {
        cells.push_back({{"topic", key.first},
                         {"service", key.second},
                         {"relevant", cell.counts.relevant},
                         {"not_relevant", cell.counts.not_relevant},
                         {"precision", opt(cell.precision)},
                         {"standard_error", opt(cell.standard_error)}});
    }
    j["cells"] = std::move(cells);
    json averages = json::object();
    for (const auto& [service, avg] : report.averages) {
        averages[service] = opt(avg);
    }
    j["averages"] = std::move(averages);
    if (!report.kappas.empty()) {
        json kappas = json::array();
        for (const auto& k : report.kappas) {
            kappas.push_back({{"topic", k.topic},
                              {"kappa", opt(k.kappa)},
                              {"assessors", k.assessors},
                              {"items_used", k.items_used},
                              {"items_total", k.items_total}});
        }
        j["kappa"] = std::move(kappas);
    }
    if (report.agreement) {
        j["agreement"] = {{"pairwise", opt(report.agreement->pairwise_agreement)},
                          {"perfect_matches", report.agreement->perfect_matches},
                          {"documents", report.agreement->documents}};
    }
    if (report.overlap) {
        json pairs = json::array();
        for (const auto& [pair, count] : report.overlap->pairwise) {
            pairs.push_back({{"a", pair.first}, {"b", pair.second}, {"common", count}});
        }
        j["overlap"] = {{"pairs", std::move(pairs)}, {"total", report.overlap->total}};
    }
    return j.dump();
}

void write_plot_data(std::ostream& out, const EvalReport& report) {
    out << "# topic\tservice\tprecision\tbinomial_se\tjudged\n";
    for (const auto& t : report.topics) {
        for (const auto& s : report.services) {
            auto it = report.cells.find({t, s});
            if (it == report.cells.end() || !it->second.precision) {
                continue;
            }
            out << t << '\t' << s << '\t' << *it->second.precision << '\t' << *it->second.standard_error << '\t'
                << it->second.counts.judged() << '\n';
        }
    }
}

} // namespace scirank
