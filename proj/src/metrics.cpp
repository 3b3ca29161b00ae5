#include "amreval/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "amreval/errors.hpp"
#include "amreval/transport.hpp"

namespace amreval {

const char* metric_name(MetricId id) {
    switch (id) {
        case MetricId::Simple: return "simple";
        case MetricId::Sema: return "sema";
        case MetricId::SembleuK2: return "sembleu-k2";
        case MetricId::SembleuK3: return "sembleu-k3";
        case MetricId::Smatch: return "smatch";
        case MetricId::S2match: return "s2match";
        case MetricId::WlkK2: return "wlk-k2";
        case MetricId::WwlkK2: return "wwlk-k2";
        case MetricId::WwlkK3e2n: return "wwlk-k3e2n";
    }
    return "?";
}

std::optional<MetricId> metric_from_name(const std::string& name) {
    for (MetricId id : kAllMetrics)
        if (name == metric_name(id)) return id;
    return std::nullopt;
}

bool metric_supports_micro(MetricId id) {
    switch (id) {
        case MetricId::Sema:
        case MetricId::SembleuK2:
        case MetricId::SembleuK3:
        case MetricId::Smatch:
        case MetricId::S2match:
            return true;
        default:
            return false;
    }
}

double f1(double precision, double recall) {
    double s = precision + recall;
    return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

using Bag = std::map<std::string, double>;

double bag_size(const Bag& bag) {
    double total = 0.0;
    for (const auto& [k, c] : bag) total += c;
    return total;
}

double bag_overlap(const Bag& a, const Bag& b) {
    double total = 0.0;
    for (const auto& [k, c] : a) {
        auto it = b.find(k);
        if (it != b.end()) total += std::min(c, it->second);
    }
    return total;
}

}  // namespace

MetricScore simple_jaccard(const AmrGraph& cand, const AmrGraph& ref) {
    auto bag_of = [](const AmrGraph& g) {
        Bag bag;
        for (const std::string& v : g.vars()) bag[g.concept_of(v)] += 1.0;
        for (const Edge& e : g.edges()) bag[e.relation] += 1.0;
        for (const Attribute& a : g.attributes()) {
            bag[a.relation] += 1.0;
            bag[a.value] += 1.0;  // constants count as leaf labels
        }
        return bag;
    };
    Bag a = bag_of(cand), b = bag_of(ref);
    double inter = bag_overlap(a, b);
    double uni = bag_size(a) + bag_size(b) - inter;
    MetricScore score;
    score.id = MetricId::Simple;
    score.similarity = uni > 0.0 ? clamp01(inter / uni) : 0.0;
    return score;
}

MetricScore sema(const AmrGraph& cand, const AmrGraph& ref, bool unary_concepts) {
    auto bag_of = [&](const AmrGraph& g) {
        Bag bag;
        for (const Edge& e : g.edges())
            bag["r\x1f" + g.concept_of(e.source) + "\x1f" + e.relation + "\x1f" +
                g.concept_of(e.target)] += 1.0;
        for (const Attribute& a : g.attributes())
            bag["a\x1f" + g.concept_of(a.source) + "\x1f" + a.relation + "\x1f" + a.value] +=
                1.0;
        if (unary_concepts)
            for (const std::string& v : g.vars()) bag["c\x1f" + g.concept_of(v)] += 1.0;
        return bag;
    };
    Bag a = bag_of(cand), b = bag_of(ref);
    double matched = bag_overlap(a, b);
    double ca = bag_size(a), cb = bag_size(b);
    MetricScore score;
    score.id = MetricId::Sema;
    score.has_f1 = true;
    score.triples = {matched, ca, cb};
    score.precision = ca > 0.0 ? matched / ca : 0.0;
    score.recall = cb > 0.0 ? matched / cb : 0.0;
    score.similarity = clamp01(f1(score.precision, score.recall));
    return score;
}

MetricScore sembleu(const AmrGraph& cand, const AmrGraph& ref, int k, bool smooth) {
    if (k < 1 || k > 3) throw UsageError("sembleu order must be in 1..3");
    MetricScore score;
    score.id = k == 2 ? MetricId::SembleuK2 : MetricId::SembleuK3;
    for (int order = 1; order <= k; ++order) {
        auto bc = extract_kgrams(cand, order);
        auto br = extract_kgrams(ref, order);
        MatchCounts counts;
        for (const auto& [gram, n] : bc) {
            counts.cand_total += static_cast<double>(n);
            auto it = br.find(gram);
            if (it != br.end())
                counts.matched += static_cast<double>(std::min(n, it->second));
        }
        for (const auto& [gram, n] : br) counts.ref_total += static_cast<double>(n);
        score.grams.push_back(counts);
    }
    score.similarity = clamp01(sembleu_combine(score.grams, smooth));
    return score;
}

double sembleu_combine(const std::vector<MatchCounts>& grams, bool smooth) {
    double log_sum = 0.0;
    double cand_total = 0.0, ref_total = 0.0;
    std::size_t k = grams.size();
    for (const MatchCounts& g : grams) {
        cand_total += g.cand_total;
        ref_total += g.ref_total;
        double matched = g.matched, total = g.cand_total;
        if (total == 0.0 && g.ref_total == 0.0) continue;  // order exceeds both graphs
        if (smooth) {
            matched += 1.0;
            total += 1.0;
        }
        if (matched <= 0.0 || total <= 0.0) return 0.0;
        log_sum += std::log(matched / total) / static_cast<double>(k);
    }
    double bp = 1.0;
    if (cand_total <= 0.0) return 0.0;
    if (cand_total < ref_total) bp = std::exp(1.0 - ref_total / cand_total);
    return bp * std::exp(log_sum);
}

// --- Weisfeiler-Leman kernel -------------------------------------------------

namespace {

std::vector<std::map<std::string, double>> wl_refine(const LabeledView& view, int k) {
    std::vector<std::map<std::string, double>> per_iter(k + 1);
    std::vector<std::string> label(view.size());
    for (std::size_t v = 0; v < view.size(); ++v) {
        label[v] = view.node(v).label;
        per_iter[0][label[v]] += 1.0;
    }
    for (int it = 1; it <= k; ++it) {
        std::vector<std::string> next(view.size());
        for (std::size_t v = 0; v < view.size(); ++v) {
            std::vector<std::string> parts;
            parts.reserve(view.arcs(v).size());
            for (const ViewArc& arc : view.arcs(v))
                // Direction marker: without it a 3-node out-star and a chain
                // refine identically.
                parts.push_back((arc.outgoing ? ">" : "<") + arc.label + "\x1f" +
                                label[arc.neighbor]);
            std::sort(parts.begin(), parts.end());
            std::string sig = label[v];
            for (const std::string& p : parts) {
                sig += "\x1e";
                sig += p;
            }
            next[v] = std::move(sig);
            per_iter[it][next[v]] += 1.0;
        }
        label = std::move(next);
    }
    return per_iter;
}

}  // namespace

MetricScore wlk(const AmrGraph& cand, const AmrGraph& ref, int k) {
    if (k < 0) throw UsageError("wlk iterations must be nonnegative");
    LabeledView va(cand), vb(ref);
    auto fa = wl_refine(va, k);
    auto fb = wl_refine(vb, k);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int it = 0; it <= k; ++it) {
        for (const auto& [sig, c] : fa[it]) {
            na += c * c;
            auto jt = fb[it].find(sig);
            if (jt != fb[it].end()) dot += c * jt->second;
        }
        for (const auto& [sig, c] : fb[it]) nb += c * c;
    }
    MetricScore score;
    score.id = MetricId::WlkK2;
    score.similarity = (na > 0.0 && nb > 0.0) ? clamp01(dot / std::sqrt(na * nb)) : 0.0;
    return score;
}

// --- Wasserstein WLK ----------------------------------------------------------

namespace {

void add_scaled(SymbolicVec& dst, const SymbolicVec& src, double factor) {
    if (dst.known.size() < src.known.size()) dst.known.resize(src.known.size(), 0.0);
    for (std::size_t i = 0; i < src.known.size(); ++i) dst.known[i] += factor * src.known[i];
    for (const auto& [tok, coef] : src.oov) dst.oov[tok] += factor * coef;
}

double expected_squared(const SymbolicVec& a, const SymbolicVec& b, double sigma2,
                        std::size_t dim) {
    double sq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        double da = i < a.known.size() ? a.known[i] : 0.0;
        double db = i < b.known.size() ? b.known[i] : 0.0;
        sq += (da - db) * (da - db);
    }
    double coef_sq = 0.0;
    auto ia = a.oov.begin();
    auto ib = b.oov.begin();
    while (ia != a.oov.end() || ib != b.oov.end()) {
        if (ib == b.oov.end() || (ia != a.oov.end() && ia->first < ib->first)) {
            coef_sq += ia->second * ia->second;
            ++ia;
        } else if (ia == a.oov.end() || ib->first < ia->first) {
            coef_sq += ib->second * ib->second;
            ++ib;
        } else {
            double d = ia->second - ib->second;
            coef_sq += d * d;
            ++ia;
            ++ib;
        }
    }
    return sq + static_cast<double>(dim) * sigma2 * coef_sq;
}

// h0 = token embedding; h_{i+1}(v) = 1/2 h_i(v) + 1/2 mean_u w(v,u) h_i(u)
// over both edge directions (isolated nodes keep their embedding).
std::vector<std::vector<SymbolicVec>> contextualize(const LabeledView& view,
                                                    const EmbeddingStore& store, int k) {
    std::vector<std::vector<SymbolicVec>> layers(k + 1);
    layers[0].reserve(view.size());
    for (std::size_t v = 0; v < view.size(); ++v)
        layers[0].push_back(store.symbolic_of(view.node(v).label));
    for (int it = 1; it <= k; ++it) {
        layers[it].resize(view.size());
        for (std::size_t v = 0; v < view.size(); ++v) {
            const auto& arcs = view.arcs(v);
            if (arcs.empty()) {
                layers[it][v] = layers[it - 1][v];
                continue;
            }
            SymbolicVec acc;
            acc.known.assign(store.dimension(), 0.0);
            for (const ViewArc& arc : arcs)
                add_scaled(acc, layers[it - 1][arc.neighbor], arc.weight);
            double inv = 1.0 / static_cast<double>(arcs.size());
            SymbolicVec mixed;
            mixed.known.assign(store.dimension(), 0.0);
            add_scaled(mixed, layers[it - 1][v], 0.5);
            add_scaled(mixed, acc, 0.5 * inv);
            layers[it][v] = std::move(mixed);
        }
    }
    return layers;
}

MetricScore wwlk_impl(const AmrGraph& cand, const AmrGraph& ref,
                      const EmbeddingStore& store, int k, MetricId id) {
    LabeledView va(cand), vb(ref);
    auto la = contextualize(va, store, k);
    auto lb = contextualize(vb, store, k);
    double sigma2 = store.oov_variance();
    std::size_t dim = store.dimension();
    std::vector<std::vector<double>> cost(va.size(), std::vector<double>(vb.size(), 0.0));
    for (std::size_t i = 0; i < va.size(); ++i)
        for (std::size_t j = 0; j < vb.size(); ++j) {
            double sq = 0.0;
            for (int it = 0; it <= k; ++it)
                sq += expected_squared(la[it][i], lb[it][j], sigma2, dim);
            cost[i][j] = std::sqrt(std::max(0.0, sq));
        }
    double w = wasserstein_from_cost(cost);
    MetricScore score;
    score.id = id;
    score.has_distance = true;
    score.raw_distance = w;
    score.similarity = clamp01(std::exp(-w));
    return score;
}

}  // namespace

MetricScore wwlk(const AmrGraph& cand, const AmrGraph& ref, const EmbeddingStore& store,
                 int k) {
    return wwlk_impl(cand, ref, store, k, MetricId::WwlkK2);
}

MetricScore wwlk_k3e2n(const AmrGraph& cand, const AmrGraph& ref,
                       const EmbeddingStore& store) {
    return wwlk_impl(edge_to_node_transform(cand), edge_to_node_transform(ref), store, 3,
                     MetricId::WwlkK3e2n);
}

// --- evaluator ----------------------------------------------------------------

MetricEvaluator::MetricEvaluator(const EmbeddingStore& store, EvaluatorConfig config)
    : store_(store), config_(config) {
    if (config_.restarts < 1) throw UsageError("restarts must be >= 1");
    if (config_.s2match_tau < 0.0 || config_.s2match_tau > 1.0)
        throw UsageError("s2match tau must be in [0,1]");
}

MetricScore MetricEvaluator::evaluate(MetricId id, const AmrGraph& cand,
                                      const AmrGraph& ref) const {
    return evaluate_seeded(id, cand, ref, config_.seed);
}

MetricScore MetricEvaluator::evaluate_seeded(MetricId id, const AmrGraph& cand,
                                             const AmrGraph& ref,
                                             std::uint64_t seed) const {
    switch (id) {
        case MetricId::Simple: return simple_jaccard(cand, ref);
        case MetricId::Sema: return sema(cand, ref, config_.sema_unary);
        case MetricId::SembleuK2: return sembleu(cand, ref, 2, config_.sembleu_smooth);
        case MetricId::SembleuK3: return sembleu(cand, ref, 3, config_.sembleu_smooth);
        case MetricId::Smatch:
            return smatch_align(cand, ref, config_.restarts, seed).first;
        case MetricId::S2match:
            return s2match_align(cand, ref, store_, config_.s2match_tau,
                                 config_.restarts, seed)
                .first;
        case MetricId::WlkK2: return wlk(cand, ref, 2);
        case MetricId::WwlkK2: return wwlk(cand, ref, store_, 2);
        case MetricId::WwlkK3e2n: return wwlk_k3e2n(cand, ref, store_);
    }
    throw UsageError("unknown metric id");
}

}  // namespace amreval
