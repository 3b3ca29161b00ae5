#include "amreval.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "amreval/errors.hpp"
#include "amreval/graph.hpp"
#include "amreval/metrics.hpp"
#include "amreval/penman.hpp"
#include "amreval/stats.hpp"

using namespace amreval;

struct amreval_graph {
    AmrGraph graph;
};
struct amreval_store {
    explicit amreval_store(EmbeddingStore s) : store(std::move(s)) {}
    EmbeddingStore store;
};
struct amreval_evaluator {
    const amreval_store* store;
    EvaluatorConfig config;
    std::unique_ptr<MetricEvaluator> impl;
};
struct amreval_corpus {
    EvalCorpus corpus;
};
struct amreval_table {
    ScoreTable table;
};
struct amreval_judgments {
    HumanJudgments judgments;
};

namespace {

thread_local std::string g_last_error;

amreval_status fail(amreval_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
amreval_status guarded(Fn&& fn) {
    try {
        fn();
        return AMREVAL_OK;
    } catch (const UsageError& e) {
        return fail(AMREVAL_ERR_USAGE, e.what());
    } catch (const DataError& e) {
        return fail(AMREVAL_ERR_DATA, e.what());
    } catch (const InternalError& e) {
        return fail(AMREVAL_ERR_INTERNAL, e.what());
    } catch (const std::exception& e) {
        return fail(AMREVAL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(AMREVAL_ERR_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

amreval_status require(bool ok, const char* what) {
    if (!ok) return fail(AMREVAL_ERR_USAGE, what);
    return AMREVAL_OK;
}

MetricId to_metric(int metric) {
    if (metric < 0 || metric >= static_cast<int>(kAllMetrics.size()))
        throw UsageError("metric id out of range");
    return kAllMetrics[static_cast<std::size_t>(metric)];
}

void fill_score(const MetricScore& s, amreval_score* out) {
    out->similarity = s.similarity;
    out->has_f1 = s.has_f1 ? 1 : 0;
    out->precision = s.precision;
    out->recall = s.recall;
    out->matched = s.triples.matched;
    out->cand_total = s.triples.cand_total;
    out->ref_total = s.triples.ref_total;
    out->has_distance = s.has_distance ? 1 : 0;
    out->raw_distance = s.raw_distance;
}

std::size_t metric_slot(const ScoreTable& table, int metric) {
    auto idx = table.metric_index(to_metric(metric));
    if (!idx) throw UsageError("metric was not part of this score table");
    return *idx;
}

}  // namespace

extern "C" {

const char* amreval_version(void) { return AMREVAL_VERSION_STRING; }

const char* amreval_last_error(void) { return g_last_error.c_str(); }

void amreval_string_free(char* s) { std::free(s); }

/* ---- graphs ---------------------------------------------------------- */

amreval_status amreval_graph_parse(const char* text, amreval_graph** out) {
    if (require(text && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] {
        auto g = std::make_unique<amreval_graph>();
        g->graph = parse_penman(text);
        *out = g.release();
    });
}

void amreval_graph_free(amreval_graph* g) { delete g; }

amreval_status amreval_graph_serialize(const amreval_graph* g, char** out) {
    if (require(g && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] { *out = dup_string(serialize_penman(g->graph)); });
}

amreval_status amreval_graph_triples(const amreval_graph* g, char** out) {
    if (require(g && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] {
        std::vector<std::string> lines;
        for (const Triple& t : to_triples(g->graph)) lines.push_back(triple_to_string(t));
        std::sort(lines.begin(), lines.end());
        std::string text;
        for (const std::string& l : lines) {
            text += l;
            text += '\n';
        }
        *out = dup_string(text);
    });
}

amreval_status amreval_graph_kgrams(const amreval_graph* g, int k, char** out) {
    if (require(g && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] {
        std::string text;
        for (const auto& [gram, count] : extract_kgrams(g->graph, k)) {
            text += std::to_string(count);
            text += '\t';
            text += gram.to_string();
            text += '\n';
        }
        *out = dup_string(text);
    });
}

amreval_status amreval_graph_e2n(const amreval_graph* g, amreval_graph** out) {
    if (require(g && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] {
        auto t = std::make_unique<amreval_graph>();
        t->graph = edge_to_node_transform(g->graph);
        *out = t.release();
    });
}

amreval_status amreval_graph_counts(const amreval_graph* g, size_t* nodes, size_t* edges,
                                    size_t* attributes) {
    if (require(g, "null graph") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    if (nodes) *nodes = g->graph.node_count();
    if (edges) *edges = g->graph.edges().size();
    if (attributes) *attributes = g->graph.attributes().size();
    return AMREVAL_OK;
}

const char* amreval_graph_id(const amreval_graph* g) {
    if (!g) return "";
    for (const auto& [k, v] : g->graph.metadata())
        if (k == "id") return v.c_str();
    return "";
}

amreval_status amreval_graphs_load(const char* path, amreval_graph*** out, size_t* n) {
    if (require(path && out && n, "null argument") != AMREVAL_OK)
        return AMREVAL_ERR_USAGE;
    return guarded([&] {
        std::vector<AmrGraph> graphs = read_amr_file(path);
        auto** arr = static_cast<amreval_graph**>(
            std::malloc(sizeof(amreval_graph*) * std::max<std::size_t>(1, graphs.size())));
        if (!arr) throw InternalError("out of memory");
        for (std::size_t i = 0; i < graphs.size(); ++i) {
            arr[i] = new amreval_graph();
            arr[i]->graph = std::move(graphs[i]);
        }
        *out = arr;
        *n = graphs.size();
    });
}

void amreval_graphs_free(amreval_graph** graphs, size_t n) {
    if (!graphs) return;
    for (size_t i = 0; i < n; ++i) delete graphs[i];
    std::free(graphs);
}

/* ---- embeddings ------------------------------------------------------ */

amreval_status amreval_store_load(const char* path, size_t limit, amreval_store** out) {
    if (require(path && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] {
        auto s = std::make_unique<amreval_store>(EmbeddingStore::load_file(path, limit));
        *out = s.release();
    });
}

amreval_status amreval_store_hash_fallback(size_t dim, amreval_store** out) {
    if (require(out != nullptr, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] {
        auto s = std::make_unique<amreval_store>(EmbeddingStore::hash_fallback(dim ? dim : 32));
        *out = s.release();
    });
}

void amreval_store_free(amreval_store* s) { delete s; }

/* ---- evaluator ------------------------------------------------------- */

void amreval_config_default(amreval_config* cfg) {
    if (!cfg) return;
    cfg->seed = 0;
    cfg->restarts = 4;
    cfg->s2match_tau = 0.5;
    cfg->sembleu_smooth = 0;
    cfg->sema_unary = 1;
}

amreval_status amreval_evaluator_create(const amreval_store* store,
                                        const amreval_config* cfg,
                                        amreval_evaluator** out) {
    if (require(store && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] {
        EvaluatorConfig config;
        if (cfg) {
            config.seed = cfg->seed;
            config.restarts = cfg->restarts;
            config.s2match_tau = cfg->s2match_tau;
            config.sembleu_smooth = cfg->sembleu_smooth != 0;
            config.sema_unary = cfg->sema_unary != 0;
        }
        auto ev = std::make_unique<amreval_evaluator>();
        ev->store = store;
        ev->config = config;
        ev->impl = std::make_unique<MetricEvaluator>(store->store, config);
        *out = ev.release();
    });
}

void amreval_evaluator_free(amreval_evaluator* ev) { delete ev; }

int amreval_metric_count(void) { return static_cast<int>(kAllMetrics.size()); }

const char* amreval_metric_name(int metric) {
    if (metric < 0 || metric >= amreval_metric_count()) return nullptr;
    return metric_name(kAllMetrics[static_cast<std::size_t>(metric)]);
}

amreval_status amreval_metric_from_name(const char* name, int* out) {
    if (require(name && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    auto id = metric_from_name(name);
    if (!id) return fail(AMREVAL_ERR_USAGE, std::string("unknown metric name: ") + name);
    for (std::size_t i = 0; i < kAllMetrics.size(); ++i)
        if (kAllMetrics[i] == *id) *out = static_cast<int>(i);
    return AMREVAL_OK;
}

int amreval_metric_supports_micro(int metric) {
    if (metric < 0 || metric >= amreval_metric_count()) return 0;
    return metric_supports_micro(kAllMetrics[static_cast<std::size_t>(metric)]) ? 1 : 0;
}

amreval_status amreval_score_pair(const amreval_evaluator* ev, int metric,
                                  const amreval_graph* candidate,
                                  const amreval_graph* reference, amreval_score* out) {
    if (require(ev && candidate && reference && out, "null argument") != AMREVAL_OK)
        return AMREVAL_ERR_USAGE;
    return guarded([&] {
        MetricScore s =
            ev->impl->evaluate(to_metric(metric), candidate->graph, reference->graph);
        fill_score(s, out);
    });
}

/* ---- corpus ---------------------------------------------------------- */

amreval_status amreval_corpus_load(const char* gold_path, const char* const* parser_names,
                                   const char* const* parser_paths, size_t n_parsers,
                                   amreval_corpus** out) {
    if (require(gold_path && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    if (n_parsers > 0 && require(parser_names && parser_paths, "null parser arrays") !=
                             AMREVAL_OK)
        return AMREVAL_ERR_USAGE;
    return guarded([&] {
        std::vector<std::pair<std::string, std::string>> parsers;
        for (size_t i = 0; i < n_parsers; ++i)
            parsers.emplace_back(parser_names[i], parser_paths[i]);
        auto c = std::make_unique<amreval_corpus>();
        std::vector<std::string> warnings;
        c->corpus = EvalCorpus::load(gold_path, parsers, &warnings);
        for (const std::string& w : warnings)
            std::fprintf(stderr, "warning: %s\n", w.c_str());
        *out = c.release();
    });
}

void amreval_corpus_free(amreval_corpus* c) { delete c; }

size_t amreval_corpus_size(const amreval_corpus* c) { return c ? c->corpus.size() : 0; }

size_t amreval_corpus_parser_count(const amreval_corpus* c) {
    return c ? c->corpus.parser_ids().size() : 0;
}

const char* amreval_corpus_parser_name(const amreval_corpus* c, size_t parser) {
    if (!c || parser >= c->corpus.parser_ids().size()) return nullptr;
    return c->corpus.parser_ids()[parser].c_str();
}

const char* amreval_corpus_item_id(const amreval_corpus* c, size_t item) {
    if (!c || item >= c->corpus.size()) return nullptr;
    return c->corpus.item(item).id.c_str();
}

const char* amreval_corpus_sentence(const amreval_corpus* c, size_t item) {
    if (!c || item >= c->corpus.size()) return nullptr;
    return c->corpus.item(item).sentence.c_str();
}

/* ---- judgments -------------------------------------------------------- */

amreval_status amreval_judgments_create(amreval_judgments** out) {
    if (require(out != nullptr, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    *out = new amreval_judgments();
    return AMREVAL_OK;
}

void amreval_judgments_free(amreval_judgments* j) { delete j; }

amreval_status amreval_judgments_load_preferences(amreval_judgments* j, const char* path) {
    if (require(j && path, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] { j->judgments.load_preferences(path); });
}

amreval_status amreval_judgments_load_acceptability(amreval_judgments* j,
                                                    const char* path) {
    if (require(j && path, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] { j->judgments.load_acceptability(path); });
}

amreval_status amreval_judgments_check(const amreval_judgments* j,
                                       const amreval_corpus* c) {
    if (require(j && c, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] { j->judgments.check_against(c->corpus); });
}

int amreval_judgments_preference(const amreval_judgments* j, const char* id) {
    if (!j || !id) return AMREVAL_NO_LABEL;
    auto v = j->judgments.preference(id);
    return v ? *v : AMREVAL_NO_LABEL;
}

int amreval_judgments_acceptability(const amreval_judgments* j, const char* id,
                                    const char* parser) {
    if (!j || !id || !parser) return AMREVAL_NO_LABEL;
    auto v = j->judgments.acceptability(id, parser);
    return v ? *v : AMREVAL_NO_LABEL;
}

/* ---- score table ------------------------------------------------------ */

amreval_status amreval_table_build(const amreval_evaluator* ev, const amreval_corpus* c,
                                   const int* metrics, size_t n_metrics,
                                   amreval_table** out) {
    if (require(ev && c && metrics && out && n_metrics > 0, "null argument") != AMREVAL_OK)
        return AMREVAL_ERR_USAGE;
    return guarded([&] {
        std::vector<MetricId> ids;
        for (size_t i = 0; i < n_metrics; ++i) ids.push_back(to_metric(metrics[i]));
        auto t = std::make_unique<amreval_table>();
        t->table = ScoreTable::build(*ev->impl, c->corpus, ids);
        *out = t.release();
    });
}

void amreval_table_free(amreval_table* t) { delete t; }

amreval_status amreval_table_score(const amreval_table* t, int metric, size_t parser,
                                   size_t item, amreval_score* out) {
    if (require(t && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] {
        fill_score(t->table.at(metric_slot(t->table, metric), parser, item), out);
    });
}

amreval_status amreval_table_macro(const amreval_table* t, int metric, size_t parser,
                                   double* out) {
    if (require(t && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded(
        [&] { *out = corpus_score_macro(t->table, metric_slot(t->table, metric), parser); });
}

amreval_status amreval_table_micro(const amreval_table* t, int metric, size_t parser,
                                   double* out) {
    if (require(t && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded(
        [&] { *out = corpus_score_micro(t->table, metric_slot(t->table, metric), parser); });
}

amreval_status amreval_table_preference_counts(const amreval_table* t, int metric,
                                               size_t parser_a, size_t parser_b,
                                               double* wins_a, double* wins_b,
                                               size_t* strict_a, size_t* strict_b,
                                               size_t* ties) {
    if (require(t != nullptr, "null table") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] {
        PreferenceCounts counts =
            preference_counts(t->table, metric_slot(t->table, metric), parser_a, parser_b);
        if (wins_a) *wins_a = counts.wins_a;
        if (wins_b) *wins_b = counts.wins_b;
        if (strict_a) *strict_a = counts.strict_a;
        if (strict_b) *strict_b = counts.strict_b;
        if (ties) *ties = counts.ties;
    });
}

amreval_status amreval_table_pairwise_accuracy(const amreval_table* t, int metric,
                                               size_t parser_a, size_t parser_b,
                                               const amreval_judgments* j, double* out,
                                               size_t* n_signed) {
    if (require(t && j && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] {
        *out = pairwise_accuracy(t->table, metric_slot(t->table, metric), parser_a,
                                 parser_b, j->judgments, n_signed);
    });
}

amreval_status amreval_table_acceptability_delta(const amreval_table* t, int metric,
                                                 const amreval_judgments* j, double* out) {
    if (require(t && j && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] {
        *out = acceptability_delta(t->table, metric_slot(t->table, metric), j->judgments);
    });
}

amreval_status amreval_table_spearman(const amreval_table* t, int metric_a, int metric_b,
                                      double* rho, int* defined) {
    if (require(t && rho && defined, "null argument") != AMREVAL_OK)
        return AMREVAL_ERR_USAGE;
    return guarded([&] {
        std::size_t ma = metric_slot(t->table, metric_a);
        std::size_t mb = metric_slot(t->table, metric_b);
        std::vector<double> sa, sb;
        for (std::size_t p = 0; p < t->table.parser_ids().size(); ++p)
            for (std::size_t i = 0; i < t->table.item_ids().size(); ++i) {
                sa.push_back(t->table.similarity(ma, p, i));
                sb.push_back(t->table.similarity(mb, p, i));
            }
        auto v = (ma == mb) ? std::optional<double>(1.0) : spearman(sa, sb);
        *defined = v.has_value() ? 1 : 0;
        *rho = v.value_or(0.0);
    });
}

amreval_status amreval_table_bootstrap_pa(const amreval_table* t, int metric,
                                          size_t parser_a, size_t parser_b,
                                          const amreval_judgments* j, int replicates,
                                          double level, uint64_t seed, double* lo,
                                          double* hi) {
    if (require(t && j && lo && hi, "null argument") != AMREVAL_OK)
        return AMREVAL_ERR_USAGE;
    return guarded([&] {
        auto ci = bootstrap_pa_ci(t->table, metric_slot(t->table, metric), parser_a,
                                  parser_b, j->judgments, replicates, level, seed);
        *lo = ci.first;
        *hi = ci.second;
    });
}

amreval_status amreval_table_bootstrap_adelta(const amreval_table* t, int metric,
                                              const amreval_judgments* j, int replicates,
                                              double level, uint64_t seed, double* lo,
                                              double* hi) {
    if (require(t && j && lo && hi, "null argument") != AMREVAL_OK)
        return AMREVAL_ERR_USAGE;
    return guarded([&] {
        auto ci = bootstrap_adelta_ci(t->table, metric_slot(t->table, metric),
                                      j->judgments, replicates, level, seed);
        *lo = ci.first;
        *hi = ci.second;
    });
}

amreval_status amreval_human_adelta(const amreval_corpus* c, const amreval_judgments* j,
                                    double* out) {
    if (require(c && j && out, "null argument") != AMREVAL_OK) return AMREVAL_ERR_USAGE;
    return guarded([&] { *out = acceptability_delta_human(c->corpus, j->judgments); });
}

amreval_status amreval_human_bootstrap_adelta(const amreval_corpus* c,
                                              const amreval_judgments* j, int replicates,
                                              double level, uint64_t seed, double* lo,
                                              double* hi) {
    if (require(c && j && lo && hi, "null argument") != AMREVAL_OK)
        return AMREVAL_ERR_USAGE;
    return guarded([&] {
        auto ci =
            bootstrap_adelta_ci_human(c->corpus, j->judgments, replicates, level, seed);
        *lo = ci.first;
        *hi = ci.second;
    });
}

amreval_status amreval_binomial_test(long long wins, long long n, double p0,
                                     double* p_value) {
    if (require(p_value != nullptr, "null argument") != AMREVAL_OK)
        return AMREVAL_ERR_USAGE;
    return guarded([&] { *p_value = binomial_test(wins, n, p0); });
}

amreval_status amreval_length_buckets(const amreval_corpus* c,
                                      const double* per_item_values, size_t n, int cap,
                                      amreval_bucket** out, size_t* out_n) {
    if (require(c && per_item_values && out && out_n, "null argument") != AMREVAL_OK)
        return AMREVAL_ERR_USAGE;
    return guarded([&] {
        if (n != c->corpus.size()) throw UsageError("value count != corpus size");
        std::vector<std::string> sentences;
        std::vector<double> values(per_item_values, per_item_values + n);
        for (std::size_t i = 0; i < n; ++i) {
            if (c->corpus.item(i).sentence.empty())
                throw DataError("item '" + c->corpus.item(i).id +
                                "' has no ::snt sentence line");
            sentences.push_back(c->corpus.item(i).sentence);
        }
        auto buckets = length_buckets(sentences, values, cap);
        auto* arr = static_cast<amreval_bucket*>(
            std::malloc(sizeof(amreval_bucket) * std::max<std::size_t>(1, buckets.size())));
        if (!arr) throw InternalError("out of memory");
        for (std::size_t i = 0; i < buckets.size(); ++i)
            arr[i] = {buckets[i].bucket, buckets[i].mean, buckets[i].count};
        *out = arr;
        *out_n = buckets.size();
    });
}

void amreval_buckets_free(amreval_bucket* buckets) { std::free(buckets); }

}  // extern "C"
