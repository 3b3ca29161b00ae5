#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "amreval/embeddings.hpp"
#include "amreval/graph.hpp"

namespace amreval {

enum class MetricId {
    Simple,
    Sema,
    SembleuK2,
    SembleuK3,
    Smatch,
    S2match,
    WlkK2,
    WwlkK2,
    WwlkK3e2n,
};

inline constexpr std::array<MetricId, 9> kAllMetrics = {
    MetricId::Simple,    MetricId::Sema,   MetricId::SembleuK2,
    MetricId::SembleuK3, MetricId::Smatch, MetricId::S2match,
    MetricId::WlkK2,     MetricId::WwlkK2, MetricId::WwlkK3e2n,
};

// Lowercase hyphenated names, accepted by the CLI --metrics flag.
const char* metric_name(MetricId id);
std::optional<MetricId> metric_from_name(const std::string& name);
// Micro (pooled-count) aggregation is defined for the triple-F1 metrics and
// SemBLEU only.
bool metric_supports_micro(MetricId id);

// Pooled match/total counts; fractional for graded (s2match) matches.
struct MatchCounts {
    double matched = 0.0;
    double cand_total = 0.0;
    double ref_total = 0.0;
};

struct MetricScore {
    MetricId id = MetricId::Simple;
    double similarity = 0.0;  // in [0,1], higher = more similar

    bool has_f1 = false;
    double precision = 0.0;
    double recall = 0.0;
    MatchCounts triples;  // valid when has_f1

    std::vector<MatchCounts> grams;  // SemBLEU: per order 1..k (clipped matches)

    bool has_distance = false;
    double raw_distance = 0.0;  // WWLK family: Wasserstein distance
};

// Injective candidate-variable -> reference-variable map found by the
// alignment search, with the (possibly graded) matched-triple mass.
struct VarAlignment {
    std::map<std::string, std::string> mapping;
    double matched = 0.0;
};

double f1(double precision, double recall);  // 0/0 := 0

// --- individual metrics -----------------------------------------------------

// Multiset Jaccard over the combined bag of concept and relation labels.
MetricScore simple_jaccard(const AmrGraph& cand, const AmrGraph& ref);

// Alignment-free triple F1 after replacing variables with concept labels.
// unary_concepts adds one (concept) pseudo-triple per node so that concept
// overlap contributes.
MetricScore sema(const AmrGraph& cand, const AmrGraph& ref, bool unary_concepts = true);

// BLEU-style score over k-gram bags (orders 1..k, uniform weights, brevity
// penalty on total gram counts). smooth enables add-one smoothing; default
// off, so any zero precision yields 0.
MetricScore sembleu(const AmrGraph& cand, const AmrGraph& ref, int k, bool smooth = false);

// Combines per-order gram counts into the BLEU-style score; shared by
// per-pair scoring and pooled micro aggregation.
double sembleu_combine(const std::vector<MatchCounts>& grams, bool smooth = false);

// Triple F1 under the best injective variable alignment found by seeded
// hill climbing (restart 0 is greedy concept matching).
std::pair<MetricScore, VarAlignment> smatch_align(const AmrGraph& cand,
                                                  const AmrGraph& ref,
                                                  int restarts = 4,
                                                  std::uint64_t seed = 0);

// Smatch with graded instance matches: an instance pair contributes
// cosine(conceptA, conceptB) when >= tau (exact string match contributes 1).
std::pair<MetricScore, VarAlignment> s2match_align(const AmrGraph& cand,
                                                   const AmrGraph& ref,
                                                   const EmbeddingStore& store,
                                                   double tau = 0.5,
                                                   int restarts = 4,
                                                   std::uint64_t seed = 0);

// Weisfeiler-Leman kernel: cosine over label-refinement count vectors of
// iterations 0..k (signatures use both edge directions).
MetricScore wlk(const AmrGraph& cand, const AmrGraph& ref, int k = 2);

// Wasserstein WLK: nodes embedded, contextualized k times, represented by
// the concatenation [h0; ...; hk]; similarity = exp(-W) with W the exact
// Wasserstein distance under the expected-distance OOV model.
MetricScore wwlk(const AmrGraph& cand, const AmrGraph& ref,
                 const EmbeddingStore& store, int k = 2);

// WWLK over edge-to-node transformed graphs with k=3 and unit edge weights;
// edge labels participate as nodes.
MetricScore wwlk_k3e2n(const AmrGraph& cand, const AmrGraph& ref,
                       const EmbeddingStore& store);

// --- evaluator --------------------------------------------------------------

struct EvaluatorConfig {
    std::uint64_t seed = 0;
    int restarts = 4;
    double s2match_tau = 0.5;
    bool sembleu_smooth = false;
    bool sema_unary = true;
};

// Immutable bundle of metric configuration plus the embedding store; pair
// evaluations are pure and safe to run concurrently.
class MetricEvaluator {
public:
    explicit MetricEvaluator(const EmbeddingStore& store, EvaluatorConfig config = {});

    MetricScore evaluate(MetricId id, const AmrGraph& cand, const AmrGraph& ref) const;
    // Same with an explicit seed for the alignment search (used by the score
    // table so results do not depend on evaluation order).
    MetricScore evaluate_seeded(MetricId id, const AmrGraph& cand, const AmrGraph& ref,
                                std::uint64_t seed) const;

    const EvaluatorConfig& config() const { return config_; }
    const EmbeddingStore& store() const { return store_; }

private:
    const EmbeddingStore& store_;
    EvaluatorConfig config_;
};

}  // namespace amreval
