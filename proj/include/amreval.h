/*
 * amreval — AMR graph similarity metrics and parser meta-evaluation.
 *
 * C89-compatible interface to the shared library. All objects are opaque
 * handles created and destroyed through these functions; every fallible
 * call returns an amreval_status, with a thread-local human-readable
 * message available from amreval_last_error().
 */
#ifndef AMREVAL_H
#define AMREVAL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define AMREVAL_VERSION_STRING "0.1.0"

typedef enum amreval_status {
    AMREVAL_OK = 0,
    AMREVAL_ERR_USAGE = 1,   /* invalid arguments / unsupported operation */
    AMREVAL_ERR_DATA = 2,    /* malformed input files or graphs */
    AMREVAL_ERR_INTERNAL = 3 /* broken invariant; indicates a bug */
} amreval_status;

typedef struct amreval_graph amreval_graph;
typedef struct amreval_store amreval_store;
typedef struct amreval_evaluator amreval_evaluator;
typedef struct amreval_corpus amreval_corpus;
typedef struct amreval_table amreval_table;
typedef struct amreval_judgments amreval_judgments;

const char* amreval_version(void);
/* Message for the most recent failing call on this thread. */
const char* amreval_last_error(void);
/* Frees any char* returned through an out-parameter. */
void amreval_string_free(char* s);

/* ---- graphs ---------------------------------------------------------- */

/* Parses one penman expression (optionally preceded by # ::metadata). */
amreval_status amreval_graph_parse(const char* text, amreval_graph** out);
void amreval_graph_free(amreval_graph* g);
amreval_status amreval_graph_serialize(const amreval_graph* g, char** out);
/* Sorted "rel(a, b)" lines, one triple per line, TOP included. */
amreval_status amreval_graph_triples(const amreval_graph* g, char** out);
/* Sorted "count<TAB>gram" lines for the order-k gram bag (k in 1..3). */
amreval_status amreval_graph_kgrams(const amreval_graph* g, int k, char** out);
amreval_status amreval_graph_e2n(const amreval_graph* g, amreval_graph** out);
amreval_status amreval_graph_counts(const amreval_graph* g, size_t* nodes, size_t* edges,
                                    size_t* attributes);
/* `::id` metadata of the graph; empty string when absent. */
const char* amreval_graph_id(const amreval_graph* g);

/* Reads a whole AMR file (graphs separated by blank lines). The array and
 * every graph in it are owned by the caller. */
amreval_status amreval_graphs_load(const char* path, amreval_graph*** out, size_t* n);
void amreval_graphs_free(amreval_graph** graphs, size_t n);

/* ---- embeddings ------------------------------------------------------ */

/* Loads a text embedding table; limit of 0 means no vocabulary cap. */
amreval_status amreval_store_load(const char* path, size_t limit, amreval_store** out);
/* Deterministic hash-backed store; no file needed; dim 0 picks the default. */
amreval_status amreval_store_hash_fallback(size_t dim, amreval_store** out);
void amreval_store_free(amreval_store* s);

/* ---- evaluator ------------------------------------------------------- */

typedef struct amreval_config {
    uint64_t seed;
    int restarts;       /* alignment search restarts, >= 1 */
    double s2match_tau; /* graded-match threshold in [0,1] */
    int sembleu_smooth; /* nonzero enables add-one smoothing */
    int sema_unary;     /* nonzero adds unary concept pseudo-triples */
} amreval_config;

void amreval_config_default(amreval_config* cfg);

/* The store must outlive the evaluator. */
amreval_status amreval_evaluator_create(const amreval_store* store,
                                        const amreval_config* cfg,
                                        amreval_evaluator** out);
void amreval_evaluator_free(amreval_evaluator* ev);

/* Metric ids are dense 0..amreval_metric_count()-1. */
int amreval_metric_count(void);
const char* amreval_metric_name(int metric);
amreval_status amreval_metric_from_name(const char* name, int* out);
int amreval_metric_supports_micro(int metric);

typedef struct amreval_score {
    double similarity; /* in [0,1], higher = more similar */
    int has_f1;
    double precision, recall;
    double matched, cand_total, ref_total;
    int has_distance;
    double raw_distance; /* Wasserstein distance for the WWLK family */
} amreval_score;

amreval_status amreval_score_pair(const amreval_evaluator* ev, int metric,
                                  const amreval_graph* candidate,
                                  const amreval_graph* reference, amreval_score* out);

/* ---- corpus ---------------------------------------------------------- */

/* Loads gold + n_parsers candidate files, aligned by ::id when available,
 * by position otherwise. */
amreval_status amreval_corpus_load(const char* gold_path, const char* const* parser_names,
                                   const char* const* parser_paths, size_t n_parsers,
                                   amreval_corpus** out);
void amreval_corpus_free(amreval_corpus* c);
size_t amreval_corpus_size(const amreval_corpus* c);
size_t amreval_corpus_parser_count(const amreval_corpus* c);
const char* amreval_corpus_parser_name(const amreval_corpus* c, size_t parser);
const char* amreval_corpus_item_id(const amreval_corpus* c, size_t item);
const char* amreval_corpus_sentence(const amreval_corpus* c, size_t item);

/* ---- human judgments -------------------------------------------------- */

amreval_status amreval_judgments_create(amreval_judgments** out);
void amreval_judgments_free(amreval_judgments* j);
amreval_status amreval_judgments_load_preferences(amreval_judgments* j, const char* path);
amreval_status amreval_judgments_load_acceptability(amreval_judgments* j, const char* path);
/* Fails if any annotated id/parser is missing from the corpus. */
amreval_status amreval_judgments_check(const amreval_judgments* j,
                                       const amreval_corpus* c);
/* Returns -1/0/+1, or AMREVAL_NO_LABEL when absent. */
#define AMREVAL_NO_LABEL (-9)
int amreval_judgments_preference(const amreval_judgments* j, const char* id);
int amreval_judgments_acceptability(const amreval_judgments* j, const char* id,
                                    const char* parser);

/* ---- score table and statistics --------------------------------------- */

amreval_status amreval_table_build(const amreval_evaluator* ev, const amreval_corpus* c,
                                   const int* metrics, size_t n_metrics,
                                   amreval_table** out);
void amreval_table_free(amreval_table* t);
amreval_status amreval_table_score(const amreval_table* t, int metric, size_t parser,
                                   size_t item, amreval_score* out);
amreval_status amreval_table_macro(const amreval_table* t, int metric, size_t parser,
                                   double* out);
amreval_status amreval_table_micro(const amreval_table* t, int metric, size_t parser,
                                   double* out);
/* wins include half of the ties; strict counts and ties come separately. */
amreval_status amreval_table_preference_counts(const amreval_table* t, int metric,
                                               size_t parser_a, size_t parser_b,
                                               double* wins_a, double* wins_b,
                                               size_t* strict_a, size_t* strict_b,
                                               size_t* ties);
amreval_status amreval_table_pairwise_accuracy(const amreval_table* t, int metric,
                                               size_t parser_a, size_t parser_b,
                                               const amreval_judgments* j, double* out,
                                               size_t* n_signed);
amreval_status amreval_table_acceptability_delta(const amreval_table* t, int metric,
                                                 const amreval_judgments* j, double* out);
amreval_status amreval_table_spearman(const amreval_table* t, int metric_a, int metric_b,
                                      double* rho, int* defined);
amreval_status amreval_table_bootstrap_pa(const amreval_table* t, int metric,
                                          size_t parser_a, size_t parser_b,
                                          const amreval_judgments* j, int replicates,
                                          double level, uint64_t seed, double* lo,
                                          double* hi);
amreval_status amreval_table_bootstrap_adelta(const amreval_table* t, int metric,
                                              const amreval_judgments* j, int replicates,
                                              double level, uint64_t seed, double* lo,
                                              double* hi);

/* Human anchor row: acceptability labels ranked as scores. */
amreval_status amreval_human_adelta(const amreval_corpus* c, const amreval_judgments* j,
                                    double* out);
amreval_status amreval_human_bootstrap_adelta(const amreval_corpus* c,
                                              const amreval_judgments* j, int replicates,
                                              double level, uint64_t seed, double* lo,
                                              double* hi);

/* Two-sided exact binomial test. */
amreval_status amreval_binomial_test(long long wins, long long n, double p0,
                                     double* p_value);

typedef struct amreval_bucket {
    int bucket;
    double mean;
    size_t count;
} amreval_bucket;

/* Buckets per_item_values by gold-sentence token length; lengths above cap
 * pool into the cap bucket. n must equal the corpus size. */
amreval_status amreval_length_buckets(const amreval_corpus* c,
                                      const double* per_item_values, size_t n, int cap,
                                      amreval_bucket** out, size_t* out_n);
void amreval_buckets_free(amreval_bucket* buckets);

#ifdef __cplusplus
}
#endif

#endif /* AMREVAL_H */
