#pragma once

#include "scirank/index.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace scirank {

enum class Verdict { not_relevant = 0, relevant = 1 };

struct Judgment {
    std::string topic_id;
    std::string doc_id;
    std::string assessor_id;
    Verdict verdict = Verdict::not_relevant;

    friend bool operator==(const Judgment&, const Judgment&) = default;
};

/// Binary relevance judgments; at most one verdict per (topic, doc, assessor).
class JudgmentSet {
public:
    JudgmentSet() = default;
    /// Throws InvalidArgument on a repeated (topic, doc, assessor) triple.
    explicit JudgmentSet(std::vector<Judgment> judgments);

    const std::vector<Judgment>& all() const noexcept { return judgments_; }
    std::size_t size() const noexcept { return judgments_.size(); }

    /// Topic ids in ascending order.
    std::vector<std::string> topics() const;

private:
    std::vector<Judgment> judgments_;
};

/// Lines of `topic<TAB>doc<TAB>assessor<TAB>verdict`, verdict in {1,0}.
/// Blank lines and lines starting with '#' are skipped.
JudgmentSet read_judgments(std::istream& in);
JudgmentSet load_judgments(const std::filesystem::path& path);
void write_judgments(std::ostream& out, const JudgmentSet& judgments);

/// topic -> service -> doc ids in rank order.
using RunSet = std::map<std::string, std::map<std::string, std::vector<std::string>>>;

/// Lines of `topic<TAB>service<TAB>rank<TAB>doc`; order within a
/// (topic, service) follows rank.
RunSet read_runs(std::istream& in);
RunSet load_runs(const std::filesystem::path& path);
void write_runs(std::ostream& out, const RunSet& runs);

// ---------------------------------------------------------------------------
// Pooling

/// Union of each list's top-n in round-robin order across services, skipping
/// documents already pooled. Throws InvalidArgument for no lists or n < 1.
std::vector<std::string> build_pool(std::span<const std::vector<std::string>> lists, std::size_t n);
std::vector<std::string> build_pool(std::span<const RankedList> lists, std::size_t n);

/// topic -> pooled doc ids.
using Pool = std::map<std::string, std::vector<std::string>>;
Pool build_pools(const RunSet& runs, std::size_t n);

// ---------------------------------------------------------------------------
// Precision

struct PrecisionCounts {
    std::size_t relevant = 0;
    std::size_t not_relevant = 0;

    std::size_t judged() const noexcept { return relevant + not_relevant; }
    /// nullopt when nothing was judged.
    std::optional<double> precision() const;

    friend bool operator==(const PrecisionCounts&, const PrecisionCounts&) = default;
};

/// Judgments of `topic` whose doc is in `service_top_docs`; unjudged
/// documents are ignored.
PrecisionCounts precision(const JudgmentSet& judgments, const std::string& topic,
                          const std::set<std::string>& service_top_docs);

/// Arithmetic mean; throws InvalidArgument for an empty list.
double macro_average(std::span<const double> values);

/// sqrt(P(1-P)/n); throws InvalidArgument for n < 1 or P outside [0,1].
double standard_error(double proportion, std::size_t n);

// ---------------------------------------------------------------------------
// Agreement

/// Item x category rating counts; every row must sum to the same n >= 2.
struct KappaInput {
    std::vector<std::vector<std::size_t>> counts;
};

struct KappaResult {
    double kappa = 0.0;
    double mean_agreement = 0.0;     ///< P-bar
    double expected_agreement = 0.0; ///< P-bar_e
    std::vector<double> category_proportions;
    std::size_t raters = 0;
    std::size_t items = 0;
};

/// Fleiss's kappa. Returns 1.0 when every rating falls in one category.
/// Throws InvalidArgument for no items, ragged rows or fewer than 2 raters.
KappaResult fleiss_kappa_detail(const KappaInput& input);
double fleiss_kappa(const KappaInput& input);

struct TopicKappa {
    std::string topic;
    std::optional<double> kappa;
    std::size_t assessors = 0;
    std::size_t items_used = 0;   ///< docs judged by every assessor of the topic
    std::size_t items_total = 0;  ///< docs judged by anyone
};

/// Kappa over the documents judged by all of the topic's assessors.
TopicKappa topic_kappa(const JudgmentSet& judgments, const std::string& topic);

struct AgreementStats {
    /// Mean per-document share of agreeing assessor pairs, in [0,1].
    std::optional<double> pairwise_agreement;
    std::size_t perfect_matches = 0;
    std::size_t documents = 0;  ///< (topic, doc) cases with >= 2 verdicts
};

AgreementStats agreement_rate(const JudgmentSet& judgments);

// ---------------------------------------------------------------------------
// Overlap

/// topic -> service -> relevant top-n docs.
using RelevantSets = std::map<std::string, std::map<std::string, std::set<std::string>>>;

struct OverlapReport {
    /// (service a, service b) with a < b -> |A ∩ B| summed over topics.
    std::map<std::pair<std::string, std::string>, std::size_t> pairwise;
    std::size_t total = 0;

    std::size_t between(const std::string& a, const std::string& b) const;
};

/// Throws InvalidArgument when fewer than two services appear.
OverlapReport overlap(const RelevantSets& sets);

// ---------------------------------------------------------------------------
// Reports

struct CellReport {
    PrecisionCounts counts;
    std::optional<double> precision;
    std::optional<double> standard_error;
};

struct EvalReport {
    std::vector<std::string> topics;
    std::vector<std::string> services;
    /// (topic, service) -> cell
    std::map<std::pair<std::string, std::string>, CellReport> cells;
    /// Mean over topics with defined precision.
    std::map<std::string, std::optional<double>> averages;

    std::vector<TopicKappa> kappas;
    std::optional<AgreementStats> agreement;
    std::optional<OverlapReport> overlap;
};

struct CountRow {
    std::string topic;
    std::string service;
    PrecisionCounts counts;
};

/// Lines of `topic<TAB>service<TAB>relevant<TAB>not_relevant`.
std::vector<CountRow> read_counts(std::istream& in);
std::vector<CountRow> load_counts(const std::filesystem::path& path);

/// Precision matrix straight from aggregate counts.
EvalReport report_from_counts(std::span<const CountRow> rows);

struct EvalOptions {
    std::size_t top_n = 10;
};

/// Full evaluation: precision per (topic, service) over the run's top-n,
/// per-topic kappa, agreement and overlap of relevant top-n sets. A document
/// counts as relevant for overlap when most of its verdicts say so.
EvalReport evaluate(const JudgmentSet& judgments, const RunSet& runs, EvalOptions options = {});

/// Precision matrix: non relevant, relevant and precision (%) per service.
void print_report_table(std::ostream& out, const EvalReport& report);

/// Single-line JSON object.
std::string report_to_json(const EvalReport& report);

/// Tab-separated `topic service precision binomial_se judged` rows.
void write_plot_data(std::ostream& out, const EvalReport& report);

} // namespace scirank
