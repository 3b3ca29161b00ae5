#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "amreval/errors.hpp"
#include "amreval/metrics.hpp"

namespace amreval {
namespace {

// Graph triples with variables resolved to dense indices, ready for the
// alignment search. TOP is an attribute keyed on the root.
struct TripleIndex {
    std::vector<std::string> vars;
    std::vector<std::string> concepts;
    std::vector<std::tuple<std::string, int, int>> relations;       // rel, src, tgt
    std::vector<std::tuple<std::string, int, std::string>> attributes;  // rel, var, value

    explicit TripleIndex(const AmrGraph& g) {
        std::unordered_map<std::string, int> pos;
        for (const std::string& v : g.vars()) {
            pos.emplace(v, static_cast<int>(vars.size()));
            vars.push_back(v);
            concepts.push_back(g.concept_of(v));
        }
        attributes.emplace_back(kTopRelation, pos.at(g.root()), g.concept_of(g.root()));
        for (const Attribute& a : g.attributes())
            attributes.emplace_back(a.relation, pos.at(a.source), a.value);
        for (const Edge& e : g.edges())
            relations.emplace_back(e.relation, pos.at(e.source), pos.at(e.target));
    }

    std::size_t total() const {
        return concepts.size() + relations.size() + attributes.size();
    }
};

std::string rel_key(const std::string& rel, int a, int b) {
    return rel + "\x1f" + std::to_string(a) + "\x1f" + std::to_string(b);
}

std::string attr_key(const std::string& rel, int v, const std::string& value) {
    return rel + "\x1f" + std::to_string(v) + "\x1f" + value;
}

class AlignmentSearch {
public:
    AlignmentSearch(const AmrGraph& cand, const AmrGraph& ref,
                    const EmbeddingStore* store, double tau)
        : cand_(cand), ref_(ref) {
        nc_ = cand_.vars.size();
        nr_ = ref_.vars.size();
        // Instance match value for every candidate/reference variable pair.
        inst_.assign(nc_, std::vector<double>(nr_, 0.0));
        for (std::size_t i = 0; i < nc_; ++i)
            for (std::size_t j = 0; j < nr_; ++j) {
                if (cand_.concepts[i] == ref_.concepts[j]) {
                    inst_[i][j] = 1.0;
                } else if (store) {
                    double cos = store->cosine(cand_.concepts[i], ref_.concepts[j]);
                    if (cos >= tau) inst_[i][j] = cos;
                }
            }
        for (std::size_t k = 0; k < ref_.relations.size(); ++k) {
            const auto& [rel, s, t] = ref_.relations[k];
            ++ref_rel_[rel_key(rel, s, t)];
        }
        for (std::size_t k = 0; k < ref_.attributes.size(); ++k) {
            const auto& [rel, v, val] = ref_.attributes[k];
            ++ref_attr_[attr_key(rel, v, val)];
        }
    }

    double matched(const std::vector<int>& map) const {
        double total = 0.0;
        for (std::size_t i = 0; i < nc_; ++i)
            if (map[i] >= 0) total += inst_[i][map[i]];
        std::unordered_map<std::string, int> used;
        for (const auto& [rel, s, t] : cand_.relations) {
            if (map[s] < 0 || map[t] < 0) continue;
            std::string key = rel_key(rel, map[s], map[t]);
            auto it = ref_rel_.find(key);
            if (it != ref_rel_.end() && used[key] < it->second) {
                ++used[key];
                total += 1.0;
            }
        }
        std::unordered_map<std::string, int> used_attr;
        for (const auto& [rel, v, val] : cand_.attributes) {
            if (map[v] < 0) continue;
            std::string key = attr_key(rel, map[v], val);
            auto it = ref_attr_.find(key);
            if (it != ref_attr_.end() && used_attr[key] < it->second) {
                ++used_attr[key];
                total += 1.0;
            }
        }
        return total;
    }

    // Greedy by instance gain in variable order, ties to the lowest
    // reference index; leftover variables take the lowest free slot.
    std::vector<int> greedy_init() const {
        std::vector<int> map(nc_, -1);
        std::vector<bool> used(nr_, false);
        for (std::size_t i = 0; i < nc_; ++i) {
            double best = -1.0;
            int pick = -1;
            for (std::size_t j = 0; j < nr_; ++j)
                if (!used[j] && inst_[i][j] > best) {
                    best = inst_[i][j];
                    pick = static_cast<int>(j);
                }
            if (pick >= 0) {
                map[i] = pick;
                used[pick] = true;
            }
        }
        return map;
    }

    // Randomized greedy: visit variables in random order, usually taking a
    // random argmax-gain slot, sometimes a uniformly random free one. Keeps
    // restarts near plausible optima while still diversifying.
    std::vector<int> random_init(Rng& rng) const {
        std::vector<std::size_t> order(nc_);
        for (std::size_t i = 0; i < nc_; ++i) order[i] = i;
        for (std::size_t i = nc_; i > 1; --i)
            std::swap(order[i - 1], order[rng.next_below(i)]);
        std::vector<int> map(nc_, -1);
        std::vector<bool> used(nr_, false);
        for (std::size_t i : order) {
            std::vector<int> pool;
            if (rng.next_below(4) == 0) {  // exploration move
                for (std::size_t j = 0; j < nr_; ++j)
                    if (!used[j]) pool.push_back(static_cast<int>(j));
            } else {
                double best = -1.0;
                for (std::size_t j = 0; j < nr_; ++j) {
                    if (used[j]) continue;
                    if (inst_[i][j] > best + 1e-12) {
                        best = inst_[i][j];
                        pool.clear();
                    }
                    if (inst_[i][j] >= best - 1e-12) pool.push_back(static_cast<int>(j));
                }
            }
            if (pool.empty()) continue;
            int pick = pool[rng.next_below(pool.size())];
            map[i] = pick;
            used[pick] = true;
        }
        return map;
    }

    // Steepest-ascent pass over three move kinds: retarget a variable to a
    // free slot, swap two variables' images, and (on small instances) take
    // an occupied slot while relocating its owner. Repeats until no strict
    // improvement.
    double climb(std::vector<int>& map) const {
        double current = matched(map);
        const bool deep_moves = nc_ * nr_ <= 1024;
        while (true) {
            double best = current;
            std::vector<int> best_map;
            auto consider = [&](std::vector<int>&& next) {
                double m = matched(next);
                if (m > best + 1e-12) {
                    best = m;
                    best_map = std::move(next);
                }
            };
            std::vector<bool> used(nr_, false);
            std::vector<int> owner(nr_, -1);
            for (std::size_t i = 0; i < nc_; ++i)
                if (map[i] >= 0) {
                    used[map[i]] = true;
                    owner[map[i]] = static_cast<int>(i);
                }
            for (std::size_t i = 0; i < nc_; ++i) {
                for (std::size_t j = 0; j < nr_; ++j) {
                    if (used[j]) continue;
                    std::vector<int> next = map;
                    next[i] = static_cast<int>(j);
                    consider(std::move(next));
                }
            }
            for (std::size_t i = 0; i + 1 < nc_; ++i)
                for (std::size_t j = i + 1; j < nc_; ++j) {
                    if (map[i] < 0 && map[j] < 0) continue;
                    std::vector<int> next = map;
                    std::swap(next[i], next[j]);
                    consider(std::move(next));
                }
            if (deep_moves) {
                // i seizes an occupied slot r; the previous owner moves to
                // any free slot (or drops out). Escapes plateaus that the
                // single-step moves cannot cross.
                for (std::size_t i = 0; i < nc_; ++i)
                    for (std::size_t r = 0; r < nr_; ++r) {
                        int prev = owner[r];
                        if (prev < 0 || static_cast<std::size_t>(prev) == i) continue;
                        std::size_t freed =
                            map[i] >= 0 ? static_cast<std::size_t>(map[i]) : SIZE_MAX;
                        std::vector<int> base = map;
                        base[i] = static_cast<int>(r);
                        base[prev] = -1;
                        for (std::size_t j = 0; j < nr_; ++j) {
                            if (j == r) continue;
                            if (used[j] && j != freed) continue;
                            std::vector<int> next = base;
                            next[prev] = static_cast<int>(j);
                            consider(std::move(next));
                        }
                        consider(std::move(base));
                    }
            }
            if (best_map.empty()) break;
            map = std::move(best_map);
            current = best;
        }
        return current;
    }

    // Randomly reassigns two variables (swap or retarget to a free slot).
    void perturb(std::vector<int>& map, Rng& rng) const {
        for (int step = 0; step < 2; ++step) {
            std::size_t i = rng.next_below(nc_);
            if (nc_ > 1 && rng.next_below(2) == 0) {
                std::size_t j = rng.next_below(nc_);
                if (i != j) std::swap(map[i], map[j]);
                continue;
            }
            std::vector<bool> used(nr_, false);
            for (std::size_t v = 0; v < nc_; ++v)
                if (map[v] >= 0 && v != i) used[map[v]] = true;
            std::vector<int> free;
            for (std::size_t j = 0; j < nr_; ++j)
                if (!used[j]) free.push_back(static_cast<int>(j));
            if (!free.empty()) map[i] = free[rng.next_below(free.size())];
        }
    }

    std::pair<double, std::vector<int>> run(int restarts, std::uint64_t seed) const {
        double best = -1.0;
        std::vector<int> best_map;
        const int kKicks = 3;  // perturb-and-reclimb rounds per restart
        for (int r = 0; r < restarts; ++r) {
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
            std::vector<int> map = r == 0 ? greedy_init() : random_init(rng);
            double m = climb(map);
            std::vector<int> local_best = map;
            double local_m = m;
            for (int kick = 0; kick < kKicks; ++kick) {
                std::vector<int> probe = local_best;
                perturb(probe, rng);
                double pm = climb(probe);
                if (pm > local_m) {
                    local_m = pm;
                    local_best = std::move(probe);
                }
            }
            if (local_m > best) {
                best = local_m;
                best_map = std::move(local_best);
            }
        }
        return {best, best_map};
    }

    const TripleIndex& cand() const { return cand_; }
    const TripleIndex& ref() const { return ref_; }

private:
    TripleIndex cand_;
    TripleIndex ref_;
    std::size_t nc_, nr_;
    std::vector<std::vector<double>> inst_;
    std::unordered_map<std::string, int> ref_rel_;
    std::unordered_map<std::string, int> ref_attr_;
};

std::pair<MetricScore, VarAlignment> align_impl(const AmrGraph& cand, const AmrGraph& ref,
                                                const EmbeddingStore* store, double tau,
                                                int restarts, std::uint64_t seed,
                                                MetricId id) {
    if (restarts < 1) throw UsageError("restarts must be >= 1");
    AlignmentSearch search(cand, ref, store, tau);
    auto [matched, map] = search.run(restarts, seed);

    MetricScore score;
    score.id = id;
    score.has_f1 = true;
    score.triples.matched = matched;
    score.triples.cand_total = static_cast<double>(search.cand().total());
    score.triples.ref_total = static_cast<double>(search.ref().total());
    score.precision = score.triples.cand_total > 0.0
                          ? matched / score.triples.cand_total
                          : 0.0;
    score.recall =
        score.triples.ref_total > 0.0 ? matched / score.triples.ref_total : 0.0;
    score.similarity = std::clamp(f1(score.precision, score.recall), 0.0, 1.0);

    VarAlignment alignment;
    alignment.matched = matched;
    for (std::size_t i = 0; i < map.size(); ++i)
        if (map[i] >= 0)
            alignment.mapping.emplace(search.cand().vars[i], search.ref().vars[map[i]]);
    return {score, alignment};
}

}  // namespace

std::pair<MetricScore, VarAlignment> smatch_align(const AmrGraph& cand,
                                                  const AmrGraph& ref, int restarts,
                                                  std::uint64_t seed) {
    return align_impl(cand, ref, nullptr, 0.0, restarts, seed, MetricId::Smatch);
}

std::pair<MetricScore, VarAlignment> s2match_align(const AmrGraph& cand,
                                                   const AmrGraph& ref,
                                                   const EmbeddingStore& store,
                                                   double tau, int restarts,
                                                   std::uint64_t seed) {
    return align_impl(cand, ref, &store, tau, restarts, seed, MetricId::S2match);
}

}  // namespace amreval
