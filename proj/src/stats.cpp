#include "amreval/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <mutex>
#include <thread>

#include "amreval/errors.hpp"
#include "amreval/penman.hpp"

namespace amreval {

// --- corpus -------------------------------------------------------------------

namespace {

bool all_have_ids(const std::vector<AmrGraph>& graphs) {
    for (const AmrGraph& g : graphs)
        if (g.id().empty()) return false;
    return !graphs.empty();
}

}  // namespace

EvalCorpus EvalCorpus::load(
    const std::string& gold_path,
    const std::vector<std::pair<std::string, std::string>>& parsers,
    std::vector<std::string>* warnings) {
    std::vector<AmrGraph> gold = read_amr_file(gold_path);
    if (gold.empty()) throw DataError("gold corpus is empty: " + gold_path);

    EvalCorpus corpus;
    bool use_ids = all_have_ids(gold);
    std::map<std::string, std::size_t> gold_by_id;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        EvalItem item;
        item.id = gold[i].id().empty() ? "item-" + std::to_string(i + 1) : gold[i].id();
        item.sentence = gold[i].sentence();
        item.gold = gold[i];
        if (!gold_by_id.emplace(item.id, i).second)
            throw DataError("duplicate item id in gold corpus: " + item.id);
        corpus.items_.push_back(std::move(item));
    }

    for (const auto& [name, path] : parsers) {
        corpus.parser_ids_.push_back(name);
        std::vector<AmrGraph> cands = read_amr_file(path);
        if (use_ids && all_have_ids(cands)) {
            std::map<std::string, AmrGraph> by_id;
            for (AmrGraph& g : cands)
                if (!by_id.emplace(g.id(), std::move(g)).second)
                    throw DataError("duplicate item id in " + path);
            for (EvalItem& item : corpus.items_) {
                auto it = by_id.find(item.id);
                if (it == by_id.end())
                    throw DataError("candidate file " + path + " misses item id '" +
                                    item.id + "'");
                item.candidates.push_back(it->second);
            }
            if (by_id.size() != corpus.items_.size())
                throw DataError("candidate file " + path +
                                " contains ids not present in the gold corpus");
        } else {
            if (cands.size() != corpus.items_.size())
                throw DataError("candidate file " + path + " has " +
                                std::to_string(cands.size()) + " graphs, gold has " +
                                std::to_string(corpus.items_.size()));
            if (warnings)
                warnings->push_back("aligning " + path +
                                    " by position (missing ::id lines)");
            for (std::size_t i = 0; i < cands.size(); ++i)
                corpus.items_[i].candidates.push_back(std::move(cands[i]));
        }
    }
    for (std::size_t i = 0; i < corpus.items_.size(); ++i)
        corpus.by_id_.emplace(corpus.items_[i].id, i);
    return corpus;
}

EvalCorpus EvalCorpus::assemble(std::vector<std::string> parser_ids,
                                std::vector<EvalItem> items) {
    EvalCorpus corpus;
    corpus.parser_ids_ = std::move(parser_ids);
    corpus.items_ = std::move(items);
    for (std::size_t i = 0; i < corpus.items_.size(); ++i) {
        if (corpus.items_[i].candidates.size() != corpus.parser_ids_.size())
            throw UsageError("item candidates do not match parser list");
        if (!corpus.by_id_.emplace(corpus.items_[i].id, i).second)
            throw DataError("duplicate item id: " + corpus.items_[i].id);
    }
    return corpus;
}

std::optional<std::size_t> EvalCorpus::parser_index(const std::string& name) const {
    for (std::size_t i = 0; i < parser_ids_.size(); ++i)
        if (parser_ids_[i] == name) return i;
    return std::nullopt;
}

std::optional<std::size_t> EvalCorpus::item_index(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

// --- judgments -----------------------------------------------------------------

namespace {

std::vector<std::string> split_tsv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, '\t')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == '\n'))
            field.pop_back();
        fields.push_back(field);
    }
    return fields;
}

// Yields data lines of an annotation TSV; validates the header is present.
std::vector<std::vector<std::string>> read_tsv(const std::string& path,
                                               std::size_t min_fields) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open annotation file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // first non-comment line is the header
            continue;
        }
        auto fields = split_tsv(line);
        if (fields.size() < min_fields)
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected at least " + std::to_string(min_fields) +
                            " tab-separated fields");
        rows.push_back(std::move(fields));
    }
    if (!header_seen) throw DataError(path + ": missing header line");
    return rows;
}

int parse_label(const std::string& s, int lo, int hi, const std::string& path) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        if (v < lo || v > hi) throw std::out_of_range(s);
        return v;
    } catch (const std::exception&) {
        throw DataError(path + ": invalid label '" + s + "'");
    }
}

}  // namespace

void HumanJudgments::load_preferences(const std::string& path) {
    for (const auto& row : read_tsv(path, 2)) {
        int label = parse_label(row[1], -1, 1, path);
        if (!preferences_.emplace(row[0], label).second)
            throw DataError(path + ": duplicate preference for id '" + row[0] + "'");
        if (row.size() > 2 && !row[2].empty()) rationales_[row[0]] = row[2];
    }
}

void HumanJudgments::load_acceptability(const std::string& path) {
    for (const auto& row : read_tsv(path, 3)) {
        int label = parse_label(row[2], 0, 1, path);
        if (!acceptability_.emplace(std::make_pair(row[0], row[1]), label).second)
            throw DataError(path + ": duplicate acceptability for ('" + row[0] + "', '" +
                            row[1] + "')");
    }
}

std::optional<int> HumanJudgments::preference(const std::string& id) const {
    auto it = preferences_.find(id);
    if (it == preferences_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> HumanJudgments::acceptability(const std::string& id,
                                                 const std::string& parser) const {
    auto it = acceptability_.find({id, parser});
    if (it == acceptability_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> HumanJudgments::rationale(const std::string& id) const {
    auto it = rationales_.find(id);
    if (it == rationales_.end()) return std::nullopt;
    return it->second;
}

void HumanJudgments::check_against(const EvalCorpus& corpus) const {
    for (const auto& [id, label] : preferences_)
        if (!corpus.item_index(id))
            throw DataError("preference annotation for unknown item id '" + id + "'");
    for (const auto& [key, label] : acceptability_) {
        if (!corpus.item_index(key.first))
            throw DataError("acceptability annotation for unknown item id '" + key.first +
                            "'");
        if (!corpus.parser_index(key.second))
            throw DataError("acceptability annotation for unknown parser '" + key.second +
                            "'");
    }
}

// --- score table ----------------------------------------------------------------

std::size_t ScoreTable::cell(std::size_t m, std::size_t p, std::size_t i) const {
    return (m * parser_ids_.size() + p) * item_ids_.size() + i;
}

const MetricScore& ScoreTable::at(std::size_t metric, std::size_t parser,
                                  std::size_t item) const {
    if (metric >= metrics_.size() || parser >= parser_ids_.size() ||
        item >= item_ids_.size())
        throw UsageError("score table index out of range");
    return cells_[cell(metric, parser, item)];
}

std::optional<std::size_t> ScoreTable::metric_index(MetricId id) const {
    for (std::size_t i = 0; i < metrics_.size(); ++i)
        if (metrics_[i] == id) return i;
    return std::nullopt;
}

ScoreTable ScoreTable::build(const MetricEvaluator& evaluator, const EvalCorpus& corpus,
                             const std::vector<MetricId>& metrics, int threads) {
    ScoreTable table;
    table.sembleu_smooth_ = evaluator.config().sembleu_smooth;
    table.metrics_ = metrics;
    table.parser_ids_ = corpus.parser_ids();
    for (std::size_t i = 0; i < corpus.size(); ++i)
        table.item_ids_.push_back(corpus.item(i).id);
    table.cells_.resize(metrics.size() * table.parser_ids().size() * corpus.size());

    std::size_t total = table.cells_.size();
    if (total == 0) return table;
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (std::size_t flat = cursor.fetch_add(1); flat < total;
             flat = cursor.fetch_add(1)) {
            std::size_t i = flat % corpus.size();
            std::size_t p = (flat / corpus.size()) % table.parser_ids().size();
            std::size_t m = flat / (corpus.size() * table.parser_ids().size());
            try {
                // Per-cell seed: independent of fill order and thread count.
                std::uint64_t cell_seed = mix_seed(
                    evaluator.config().seed,
                    mix_seed(fnv1a64(metric_name(metrics[m])),
                             mix_seed(fnv1a64(table.parser_ids()[p]),
                                      fnv1a64(table.item_ids()[i]))));
                table.cells_[flat] = evaluator.evaluate_seeded(
                    metrics[m], corpus.item(i).candidates[p], corpus.item(i).gold,
                    cell_seed);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(total));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return table;
}

ScoreTable ScoreTable::transformed(const std::function<double(double)>& f) const {
    ScoreTable out = *this;
    for (MetricScore& s : out.cells_) s.similarity = f(s.similarity);
    return out;
}

// --- statistics -------------------------------------------------------------------

double corpus_score_macro(const ScoreTable& table, std::size_t metric,
                          std::size_t parser) {
    std::size_t n = table.item_ids().size();
    if (n == 0) throw UsageError("macro score over empty corpus");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += table.similarity(metric, parser, i);
    return sum / static_cast<double>(n);
}

double corpus_score_micro(const ScoreTable& table, std::size_t metric,
                          std::size_t parser) {
    std::size_t n = table.item_ids().size();
    if (n == 0) throw UsageError("micro score over empty corpus");
    MetricId id = table.metrics()[metric];
    if (!metric_supports_micro(id))
        throw UsageError(std::string("metric does not support micro aggregation: ") +
                         metric_name(id));
    if (id == MetricId::SembleuK2 || id == MetricId::SembleuK3) {
        std::vector<MatchCounts> pooled;
        for (std::size_t i = 0; i < n; ++i) {
            const MetricScore& s = table.at(metric, parser, i);
            if (pooled.size() < s.grams.size()) pooled.resize(s.grams.size());
            for (std::size_t o = 0; o < s.grams.size(); ++o) {
                pooled[o].matched += s.grams[o].matched;
                pooled[o].cand_total += s.grams[o].cand_total;
                pooled[o].ref_total += s.grams[o].ref_total;
            }
        }
        return sembleu_combine(pooled, table.sembleu_smooth());
    }
    MatchCounts pooled;
    for (std::size_t i = 0; i < n; ++i) {
        const MetricScore& s = table.at(metric, parser, i);
        pooled.matched += s.triples.matched;
        pooled.cand_total += s.triples.cand_total;
        pooled.ref_total += s.triples.ref_total;
    }
    double p = pooled.cand_total > 0.0 ? pooled.matched / pooled.cand_total : 0.0;
    double r = pooled.ref_total > 0.0 ? pooled.matched / pooled.ref_total : 0.0;
    return f1(p, r);
}

PreferenceCounts preference_counts(const ScoreTable& table, std::size_t metric,
                                   std::size_t parser_a, std::size_t parser_b) {
    PreferenceCounts counts;
    for (std::size_t i = 0; i < table.item_ids().size(); ++i) {
        double sa = table.similarity(metric, parser_a, i);
        double sb = table.similarity(metric, parser_b, i);
        if (sa > sb)
            ++counts.strict_a;
        else if (sb > sa)
            ++counts.strict_b;
        else
            ++counts.ties;
    }
    counts.wins_a = static_cast<double>(counts.strict_a) + 0.5 * counts.ties;
    counts.wins_b = static_cast<double>(counts.strict_b) + 0.5 * counts.ties;
    return counts;
}

double pairwise_accuracy(const std::vector<double>& metric_deltas,
                         const std::vector<int>& human_signs) {
    if (metric_deltas.size() != human_signs.size())
        throw UsageError("pairwise accuracy: size mismatch");
    if (metric_deltas.empty()) throw DataError("pairwise accuracy: no signed items");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < metric_deltas.size(); ++i) {
        if (human_signs[i] == 0)
            throw UsageError("pairwise accuracy expects only signed items");
        if (metric_deltas[i] * human_signs[i] > 0.0) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(metric_deltas.size());
}

namespace {

// Signed items in corpus order: metric deltas (a - b) and human signs.
void collect_signed(const ScoreTable& table, std::size_t metric, std::size_t parser_a,
                    std::size_t parser_b, const HumanJudgments& judgments,
                    std::vector<double>& deltas, std::vector<int>& signs) {
    for (std::size_t i = 0; i < table.item_ids().size(); ++i) {
        auto pref = judgments.preference(table.item_ids()[i]);
        if (!pref || *pref == 0) continue;
        deltas.push_back(table.similarity(metric, parser_a, i) -
                         table.similarity(metric, parser_b, i));
        signs.push_back(*pref);
    }
}

// Pooled (item, parser) scores and labels for acceptability ranking.
void collect_labeled(const ScoreTable& table, std::size_t metric,
                     const HumanJudgments& judgments, std::vector<double>& scores,
                     std::vector<int>& labels) {
    for (std::size_t p = 0; p < table.parser_ids().size(); ++p)
        for (std::size_t i = 0; i < table.item_ids().size(); ++i) {
            auto label = judgments.acceptability(table.item_ids()[i], table.parser_ids()[p]);
            if (!label) continue;
            scores.push_back(table.similarity(metric, p, i));
            labels.push_back(*label);
        }
}

}  // namespace

double pairwise_accuracy(const ScoreTable& table, std::size_t metric,
                         std::size_t parser_a, std::size_t parser_b,
                         const HumanJudgments& judgments, std::size_t* n_signed) {
    std::vector<double> deltas;
    std::vector<int> signs;
    collect_signed(table, metric, parser_a, parser_b, judgments, deltas, signs);
    if (n_signed) *n_signed = deltas.size();
    return pairwise_accuracy(deltas, signs);
}

std::vector<double> average_ranks(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size(), 0.0);
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) throw DataError("median of empty set");
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

double acceptability_delta(const std::vector<double>& scores,
                           const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw UsageError("acceptability delta: size mismatch");
    std::vector<double> ranks = average_ranks(scores);
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] ? pos : neg).push_back(ranks[i]);
    if (pos.empty() || neg.empty())
        throw DataError("acceptability delta undefined: one class is empty");
    return median(std::move(pos)) - median(std::move(neg));
}

double acceptability_delta(const ScoreTable& table, std::size_t metric,
                           const HumanJudgments& judgments) {
    std::vector<double> scores;
    std::vector<int> labels;
    collect_labeled(table, metric, judgments, scores, labels);
    return acceptability_delta(scores, labels);
}

double acceptability_delta_human(const EvalCorpus& corpus,
                                 const HumanJudgments& judgments) {
    std::vector<double> scores;
    std::vector<int> labels;
    for (const std::string& parser : corpus.parser_ids())
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            auto label = judgments.acceptability(corpus.item(i).id, parser);
            if (!label) continue;
            scores.push_back(static_cast<double>(*label));
            labels.push_back(*label);
        }
    return acceptability_delta(scores, labels);
}

std::optional<double> spearman(const std::vector<double>& a,
                               const std::vector<double>& b) {
    if (a.size() != b.size()) throw UsageError("spearman: size mismatch");
    if (a.size() < 3) throw UsageError("spearman needs at least 3 observations");
    std::vector<double> ra = average_ranks(a), rb = average_ranks(b);
    double ma = 0.0, mb = 0.0;
    for (double v : ra) ma += v;
    for (double v : rb) mb += v;
    ma /= static_cast<double>(ra.size());
    mb /= static_cast<double>(rb.size());
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va <= 0.0 || vb <= 0.0) return std::nullopt;  // constant vector
    return cov / std::sqrt(va * vb);
}

std::vector<std::vector<std::optional<double>>> spearman_matrix(const ScoreTable& table) {
    std::size_t nm = table.metrics().size();
    std::vector<std::vector<double>> series(nm);
    for (std::size_t m = 0; m < nm; ++m)
        for (std::size_t p = 0; p < table.parser_ids().size(); ++p)
            for (std::size_t i = 0; i < table.item_ids().size(); ++i)
                series[m].push_back(table.similarity(m, p, i));
    std::vector<std::vector<std::optional<double>>> matrix(
        nm, std::vector<std::optional<double>>(nm));
    for (std::size_t i = 0; i < nm; ++i) {
        matrix[i][i] = 1.0;
        for (std::size_t j = i + 1; j < nm; ++j) {
            auto rho = spearman(series[i], series[j]);
            matrix[i][j] = rho;
            matrix[j][i] = rho;
        }
    }
    return matrix;
}

double binomial_test(long long wins, long long n, double p0) {
    if (n <= 0) throw UsageError("binomial test with n <= 0");
    if (wins < 0 || wins > n) throw UsageError("binomial test with wins outside 0..n");
    if (p0 <= 0.0 || p0 >= 1.0) throw UsageError("binomial test p0 must be in (0,1)");
    auto log_pmf = [&](long long k) {
        double lk = static_cast<double>(k);
        double ln = static_cast<double>(n);
        return std::lgamma(ln + 1.0) - std::lgamma(lk + 1.0) - std::lgamma(ln - lk + 1.0) +
               lk * std::log(p0) + (ln - lk) * std::log1p(-p0);
    };
    double observed = log_pmf(wins);
    double p = 0.0;
    for (long long k = 0; k <= n; ++k) {
        double lp = log_pmf(k);
        if (lp <= observed + 1e-9) p += std::exp(lp);
    }
    return std::min(1.0, p);
}

std::pair<double, double> bootstrap_ci(
    const std::function<double(const std::vector<std::size_t>&)>& statistic,
    std::size_t n, int replicates, double level, std::uint64_t seed) {
    if (n == 0) throw UsageError("bootstrap over empty data");
    if (replicates < 1) throw UsageError("bootstrap needs at least one replicate");
    if (level <= 0.0 || level >= 1.0) throw UsageError("bootstrap level must be in (0,1)");
    Rng rng(mix_seed(seed, 0x626f6f74ull));  // derive; keep the raw seed unused elsewhere
    std::vector<double> stats(replicates);
    std::vector<std::size_t> idx(n);
    for (int b = 0; b < replicates; ++b) {
        for (std::size_t i = 0; i < n; ++i) idx[i] = rng.next_below(n);
        stats[b] = statistic(idx);
    }
    std::sort(stats.begin(), stats.end());
    auto quantile = [&](double q) {
        double h = q * static_cast<double>(stats.size() - 1);
        std::size_t lo = static_cast<std::size_t>(h);
        std::size_t hi = std::min(lo + 1, stats.size() - 1);
        double frac = h - static_cast<double>(lo);
        return stats[lo] * (1.0 - frac) + stats[hi] * frac;
    };
    double alpha = 1.0 - level;
    return {quantile(alpha / 2.0), quantile(1.0 - alpha / 2.0)};
}

std::pair<double, double> bootstrap_pa_ci(const ScoreTable& table, std::size_t metric,
                                          std::size_t parser_a, std::size_t parser_b,
                                          const HumanJudgments& judgments, int replicates,
                                          double level, std::uint64_t seed) {
    std::vector<double> deltas;
    std::vector<int> signs;
    collect_signed(table, metric, parser_a, parser_b, judgments, deltas, signs);
    if (deltas.empty()) throw DataError("bootstrap PA: no signed items");
    auto stat = [&](const std::vector<std::size_t>& idx) {
        std::size_t hits = 0;
        for (std::size_t i : idx)
            if (deltas[i] * signs[i] > 0.0) ++hits;
        return static_cast<double>(hits) / static_cast<double>(idx.size());
    };
    return bootstrap_ci(stat, deltas.size(), replicates, level, seed);
}

namespace {

std::pair<double, double> bootstrap_adelta_impl(const std::vector<double>& scores,
                                                const std::vector<int>& labels,
                                                int replicates, double level,
                                                std::uint64_t seed) {
    if (scores.empty()) throw DataError("bootstrap acceptability delta: no labeled parses");
    auto stat = [&](const std::vector<std::size_t>& idx) {
        std::vector<double> s;
        std::vector<int> l;
        s.reserve(idx.size());
        l.reserve(idx.size());
        for (std::size_t i : idx) {
            s.push_back(scores[i]);
            l.push_back(labels[i]);
        }
        try {
            return acceptability_delta(s, l);
        } catch (const DataError&) {
            return 0.0;  // resample lost one class entirely
        }
    };
    return bootstrap_ci(stat, scores.size(), replicates, level, seed);
}

}  // namespace

std::pair<double, double> bootstrap_adelta_ci(const ScoreTable& table, std::size_t metric,
                                              const HumanJudgments& judgments,
                                              int replicates, double level,
                                              std::uint64_t seed) {
    std::vector<double> scores;
    std::vector<int> labels;
    collect_labeled(table, metric, judgments, scores, labels);
    return bootstrap_adelta_impl(scores, labels, replicates, level, seed);
}

std::pair<double, double> bootstrap_adelta_ci_human(const EvalCorpus& corpus,
                                                    const HumanJudgments& judgments,
                                                    int replicates, double level,
                                                    std::uint64_t seed) {
    std::vector<double> scores;
    std::vector<int> labels;
    for (const std::string& parser : corpus.parser_ids())
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            auto label = judgments.acceptability(corpus.item(i).id, parser);
            if (!label) continue;
            scores.push_back(static_cast<double>(*label));
            labels.push_back(*label);
        }
    return bootstrap_adelta_impl(scores, labels, replicates, level, seed);
}

std::size_t token_length(const std::string& sentence) {
    std::istringstream in(sentence);
    std::string tok;
    std::size_t n = 0;
    while (in >> tok) ++n;
    return n;
}

std::vector<LengthBucket> length_buckets(const std::vector<std::string>& sentences,
                                         const std::vector<double>& values, int cap) {
    if (sentences.size() != values.size())
        throw UsageError("length buckets: size mismatch");
    if (cap < 1) throw UsageError("length buckets: cap must be positive");
    std::map<int, std::pair<double, std::size_t>> acc;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        int len = static_cast<int>(token_length(sentences[i]));
        int bucket = std::min(len, cap);
        acc[bucket].first += values[i];
        acc[bucket].second += 1;
    }
    std::vector<LengthBucket> out;
    for (const auto& [bucket, sum_count] : acc)
        out.push_back({bucket, sum_count.first / static_cast<double>(sum_count.second),
                       sum_count.second});
    return out;
}

}  // namespace amreval
