#include "amreval/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "amreval/errors.hpp"

namespace amreval {

bool AmrGraph::add_node(const std::string& var, std::string concept_label) {
    if (index_.count(var)) return false;
    index_.emplace(var, vars_.size());
    vars_.push_back(var);
    concepts_.push_back(std::move(concept_label));
    return true;
}

void AmrGraph::add_edge(std::string source, std::string relation,
                        std::string target, double weight) {
    edges_.push_back({std::move(source), std::move(relation), std::move(target), weight});
}

void AmrGraph::add_attribute(std::string source, std::string relation,
                             std::string value) {
    attributes_.push_back({std::move(source), std::move(relation), std::move(value)});
}

void AmrGraph::add_metadata(std::string key, std::string value) {
    metadata_.emplace_back(std::move(key), std::move(value));
}

const std::string& AmrGraph::concept_of(const std::string& var) const {
    auto it = index_.find(var);
    if (it == index_.end()) throw UsageError("unknown variable: " + var);
    return concepts_[it->second];
}

std::string AmrGraph::meta_value(const std::string& key) const {
    for (const auto& [k, v] : metadata_)
        if (k == key) return v;
    return {};
}

void AmrGraph::validate() const {
    if (vars_.empty()) throw DataError("graph has no nodes");
    if (!has_node(root_)) throw DataError("root variable is not defined: " + root_);
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (concepts_[i].empty())
            throw DataError("empty concept label on variable: " + vars_[i]);
    for (const Edge& e : edges_) {
        if (!has_node(e.source)) throw DataError("edge source is not a node: " + e.source);
        if (!has_node(e.target)) throw DataError("edge target is not a node: " + e.target);
        if (e.weight < 0.0) throw DataError("negative edge weight");
    }
    for (const Attribute& a : attributes_)
        if (!has_node(a.source))
            throw DataError("attribute source is not a node: " + a.source);

    // Undirected reachability from the root.
    std::vector<std::vector<std::size_t>> adj(vars_.size());
    for (const Edge& e : edges_) {
        std::size_t s = index_.at(e.source), t = index_.at(e.target);
        adj[s].push_back(t);
        adj[t].push_back(s);
    }
    std::vector<bool> seen(vars_.size(), false);
    std::vector<std::size_t> stack{index_.at(root_)};
    seen[stack[0]] = true;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t u : adj[v])
            if (!seen[u]) {
                seen[u] = true;
                stack.push_back(u);
            }
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (!seen[i])
            throw DataError("node not reachable from root: " + vars_[i]);
}

AmrGraph AmrGraph::renamed(
    const std::unordered_map<std::string, std::string>& mapping) const {
    auto map_of = [&](const std::string& v) -> const std::string& {
        auto it = mapping.find(v);
        if (it == mapping.end()) throw UsageError("renaming misses variable: " + v);
        return it->second;
    };
    AmrGraph out;
    out.set_root(map_of(root_));
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (!out.add_node(map_of(vars_[i]), concepts_[i]))
            throw UsageError("renaming is not injective");
    for (const Edge& e : edges_)
        out.add_edge(map_of(e.source), e.relation, map_of(e.target), e.weight);
    for (const Attribute& a : attributes_)
        out.add_attribute(map_of(a.source), a.relation, a.value);
    out.metadata_ = metadata_;
    return out;
}

std::vector<Triple> to_triples(const AmrGraph& g) {
    std::vector<Triple> out;
    out.reserve(g.node_count() + g.edges().size() + g.attributes().size() + 1);
    for (const std::string& v : g.vars())
        out.push_back({TripleKind::Instance, "instance", v, g.concept_of(v)});
    out.push_back({TripleKind::Attribute, kTopRelation, g.root(), g.concept_of(g.root())});
    for (const Attribute& a : g.attributes())
        out.push_back({TripleKind::Attribute, a.relation, a.source, a.value});
    for (const Edge& e : g.edges())
        out.push_back({TripleKind::Relation, e.relation, e.source, e.target});
    return out;
}

std::string triple_to_string(const Triple& t) {
    return t.relation + "(" + t.first + ", " + t.second + ")";
}

AmrGraph edge_to_node_transform(const AmrGraph& g) {
    std::set<std::string> taken(g.vars().begin(), g.vars().end());
    std::size_t counter = 0;
    auto fresh = [&]() {
        std::string name;
        do {
            name = "e" + std::to_string(counter++);
        } while (taken.count(name));
        taken.insert(name);
        return name;
    };

    AmrGraph out;
    out.set_root(g.root());
    for (const std::string& v : g.vars()) out.add_node(v, g.concept_of(v));
    for (const Edge& e : g.edges()) {
        std::string mid = fresh();
        out.add_node(mid, e.relation);
        out.add_edge(e.source, kE2nEdgeLabel, mid, 1.0);
        out.add_edge(mid, kE2nEdgeLabel, e.target, 1.0);
    }
    for (const Attribute& a : g.attributes()) {
        std::string mid = fresh();
        std::string leaf = fresh();
        out.add_node(mid, a.relation);
        out.add_node(leaf, a.value);
        out.add_edge(a.source, kE2nEdgeLabel, mid, 1.0);
        out.add_edge(mid, kE2nEdgeLabel, leaf, 1.0);
    }
    return out;
}

std::string KGram::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) s += (i % 2 == 1) ? " -" : "- ";
        s += tokens[i];
    }
    return s;
}

LabeledView::LabeledView(const AmrGraph& g) {
    variable_count_ = g.node_count();
    std::unordered_map<std::string, std::size_t> pos;
    for (const std::string& v : g.vars()) {
        pos.emplace(v, nodes_.size());
        nodes_.push_back({g.concept_of(v), false});
    }
    // Each attribute occurrence gets its own leaf node.
    std::vector<std::size_t> attr_leaf;
    for (const Attribute& a : g.attributes()) {
        attr_leaf.push_back(nodes_.size());
        nodes_.push_back({a.value, true});
    }
    adj_.resize(nodes_.size());
    out_.resize(nodes_.size());
    for (const Edge& e : g.edges()) {
        std::size_t s = pos.at(e.source), t = pos.at(e.target);
        adj_[s].push_back({t, e.relation, e.weight, true});
        adj_[t].push_back({s, e.relation, e.weight, false});
        out_[s].push_back({t, e.relation, e.weight, true});
    }
    for (std::size_t i = 0; i < g.attributes().size(); ++i) {
        const Attribute& a = g.attributes()[i];
        std::size_t s = pos.at(a.source), t = attr_leaf[i];
        adj_[s].push_back({t, a.relation, 1.0, true});
        adj_[t].push_back({s, a.relation, 1.0, false});
        out_[s].push_back({t, a.relation, 1.0, true});
    }
}

namespace {

void grow_paths(const LabeledView& view, std::size_t node, int remaining,
                std::vector<std::size_t>& on_path, KGram& gram,
                std::map<KGram, std::size_t>& bag) {
    if (remaining == 0) {
        ++bag[gram];
        return;
    }
    for (const ViewArc& arc : view.out_arcs(node)) {
        if (std::find(on_path.begin(), on_path.end(), arc.neighbor) != on_path.end())
            continue;  // cycle guard
        gram.tokens.push_back(arc.label);
        gram.tokens.push_back(view.node(arc.neighbor).label);
        on_path.push_back(arc.neighbor);
        grow_paths(view, arc.neighbor, remaining - 1, on_path, gram, bag);
        on_path.pop_back();
        gram.tokens.pop_back();
        gram.tokens.pop_back();
    }
}

}  // namespace

std::map<KGram, std::size_t> extract_kgrams(const AmrGraph& g, int k) {
    if (k < 1 || k > 3) throw UsageError("k-gram order must be in 1..3");
    LabeledView view(g);
    std::map<KGram, std::size_t> bag;
    // Paths start at variable nodes; constants only continue paths.
    for (std::size_t v = 0; v < view.variable_count(); ++v) {
        KGram gram;
        gram.tokens.push_back(view.node(v).label);
        std::vector<std::size_t> on_path{v};
        grow_paths(view, v, k - 1, on_path, gram, bag);
    }
    return bag;
}

}  // namespace amreval
