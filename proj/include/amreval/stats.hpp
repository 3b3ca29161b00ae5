#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amreval/graph.hpp"
#include "amreval/metrics.hpp"

namespace amreval {

struct EvalItem {
    std::string id;
    std::string sentence;
    AmrGraph gold;
    std::vector<AmrGraph> candidates;  // parallel to EvalCorpus::parser_ids()
};

// Aligned gold/candidate corpus. Alignment prefers `::id` matching when all
// files carry ids and falls back to positional with a warning.
class EvalCorpus {
public:
    static EvalCorpus load(const std::string& gold_path,
                           const std::vector<std::pair<std::string, std::string>>& parsers,
                           std::vector<std::string>* warnings = nullptr);
    static EvalCorpus assemble(std::vector<std::string> parser_ids,
                               std::vector<EvalItem> items);

    std::size_t size() const { return items_.size(); }
    const EvalItem& item(std::size_t i) const { return items_[i]; }
    const std::vector<std::string>& parser_ids() const { return parser_ids_; }
    std::optional<std::size_t> parser_index(const std::string& name) const;
    std::optional<std::size_t> item_index(const std::string& id) const;

private:
    std::vector<std::string> parser_ids_;
    std::vector<EvalItem> items_;
    std::map<std::string, std::size_t> by_id_;
};

// Human annotation labels. Preferences: per item id, -1/0/+1 (+1 = first
// parser preferred). Acceptability: per (item id, parser id), 0/1.
class HumanJudgments {
public:
    // TSV with a header line: id<TAB>label[<TAB>rationale]
    void load_preferences(const std::string& path);
    // TSV with a header line: id<TAB>parser<TAB>label
    void load_acceptability(const std::string& path);

    std::optional<int> preference(const std::string& id) const;
    std::optional<int> acceptability(const std::string& id, const std::string& parser) const;
    std::optional<std::string> rationale(const std::string& id) const;

    const std::map<std::string, int>& preferences() const { return preferences_; }
    const std::map<std::pair<std::string, std::string>, int>& acceptability_labels() const {
        return acceptability_;
    }

    // Every annotated id (and parser id) must exist in the corpus.
    void check_against(const EvalCorpus& corpus) const;

private:
    std::map<std::string, int> preferences_;
    std::map<std::string, std::string> rationales_;
    std::map<std::pair<std::string, std::string>, int> acceptability_;
};

// Frozen (metric, parser, item) -> MetricScore grid. Alignment-search seeds
// are derived per cell from the evaluator seed, so the fill order (and any
// parallelism) cannot change results.
class ScoreTable {
public:
    static ScoreTable build(const MetricEvaluator& evaluator, const EvalCorpus& corpus,
                            const std::vector<MetricId>& metrics, int threads = 0);

    const std::vector<MetricId>& metrics() const { return metrics_; }
    const std::vector<std::string>& parser_ids() const { return parser_ids_; }
    const std::vector<std::string>& item_ids() const { return item_ids_; }
    std::optional<std::size_t> metric_index(MetricId id) const;

    const MetricScore& at(std::size_t metric, std::size_t parser, std::size_t item) const;
    double similarity(std::size_t metric, std::size_t parser, std::size_t item) const {
        return at(metric, parser, item).similarity;
    }

    // Copy with f applied to every similarity (components untouched); used
    // by the rank-invariance checks.
    ScoreTable transformed(const std::function<double(double)>& f) const;

    // Evaluator setting captured at build time; micro sembleu pooling
    // recombines with the same smoothing mode.
    bool sembleu_smooth() const { return sembleu_smooth_; }

private:
    bool sembleu_smooth_ = false;
    std::vector<MetricId> metrics_;
    std::vector<std::string> parser_ids_;
    std::vector<std::string> item_ids_;
    std::vector<MetricScore> cells_;  // metric-major, then parser, then item

    std::size_t cell(std::size_t m, std::size_t p, std::size_t i) const;
};

// --- corpus statistics -------------------------------------------------------

// Mean of per-pair similarities.
double corpus_score_macro(const ScoreTable& table, std::size_t metric, std::size_t parser);

// Pooled-count score: overall triple F1 (smatch/s2match/sema) or pooled
// k-gram BLEU (sembleu). Throws UsageError for metrics without a micro
// variant.
double corpus_score_micro(const ScoreTable& table, std::size_t metric, std::size_t parser);

struct PreferenceCounts {
    double wins_a = 0.0;  // strict wins + half of the ties
    double wins_b = 0.0;
    std::size_t strict_a = 0;
    std::size_t strict_b = 0;
    std::size_t ties = 0;
};

// How often the metric prefers parser a over parser b; ties split evenly,
// so wins_a + wins_b == item count exactly.
PreferenceCounts preference_counts(const ScoreTable& table, std::size_t metric,
                                   std::size_t parser_a, std::size_t parser_b);

// Share of human-signed items (label -1/+1) where the metric's score
// difference has the human's sign; metric ties count as failures.
double pairwise_accuracy(const std::vector<double>& metric_deltas,
                         const std::vector<int>& human_signs);
double pairwise_accuracy(const ScoreTable& table, std::size_t metric,
                         std::size_t parser_a, std::size_t parser_b,
                         const HumanJudgments& judgments,
                         std::size_t* n_signed = nullptr);

// Ascending 1-based ranks with ties averaged.
std::vector<double> average_ranks(const std::vector<double>& values);

// Median rank of acceptable parses minus median rank of unacceptable ones
// over the pooled (item, parser) scores. Throws DataError if a class is
// empty.
double acceptability_delta(const std::vector<double>& scores,
                           const std::vector<int>& labels);
double acceptability_delta(const ScoreTable& table, std::size_t metric,
                           const HumanJudgments& judgments);
// The human anchor row: acceptability labels ranked as scores.
double acceptability_delta_human(const EvalCorpus& corpus, const HumanJudgments& judgments);

// Spearman's rho with average-rank ties; nullopt when either vector is
// constant (correlation undefined).
std::optional<double> spearman(const std::vector<double>& a, const std::vector<double>& b);

// Symmetric metric x metric matrix over all (parser, item) scores.
std::vector<std::vector<std::optional<double>>> spearman_matrix(const ScoreTable& table);

// Two-sided exact binomial p-value (sum of outcomes no more likely than the
// observed one).
double binomial_test(long long wins, long long n, double p0 = 0.5);

// Percentile bootstrap over index resamples; deterministic for fixed seed.
std::pair<double, double> bootstrap_ci(
    const std::function<double(const std::vector<std::size_t>&)>& statistic,
    std::size_t n, int replicates, double level, std::uint64_t seed);

std::pair<double, double> bootstrap_pa_ci(const ScoreTable& table, std::size_t metric,
                                          std::size_t parser_a, std::size_t parser_b,
                                          const HumanJudgments& judgments, int replicates,
                                          double level, std::uint64_t seed);
std::pair<double, double> bootstrap_adelta_ci(const ScoreTable& table, std::size_t metric,
                                              const HumanJudgments& judgments,
                                              int replicates, double level,
                                              std::uint64_t seed);
std::pair<double, double> bootstrap_adelta_ci_human(const EvalCorpus& corpus,
                                                    const HumanJudgments& judgments,
                                                    int replicates, double level,
                                                    std::uint64_t seed);

struct LengthBucket {
    int bucket = 0;
    double mean = 0.0;
    std::size_t count = 0;
};

std::size_t token_length(const std::string& sentence);

// Whitespace-token sentence lengths bucketed with everything above cap
// pooled into the cap bucket; per-bucket mean of the given values.
std::vector<LengthBucket> length_buckets(const std::vector<std::string>& sentences,
                                         const std::vector<double>& values, int cap = 55);

}  // namespace amreval
