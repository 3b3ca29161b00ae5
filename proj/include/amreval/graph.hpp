#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace amreval {

// Labeled edge between two variable nodes. Weight defaults to 1.0 and is
// only consulted by the Wasserstein kernels.
struct Edge {
    std::string source;
    std::string relation;
    std::string target;
    double weight = 1.0;

    bool operator==(const Edge&) const = default;
};

// Relation from a variable to a constant value (number, quoted string,
// polarity mark, ...). Constants are stored unquoted.
struct Attribute {
    std::string source;
    std::string relation;
    std::string value;

    bool operator==(const Attribute&) const = default;
};

// Rooted, directed, labeled graph. Nodes are variables carrying concept
// labels; insertion order is preserved so that all downstream output is
// deterministic. Instances are immutable once validated.
class AmrGraph {
public:
    AmrGraph() = default;

    void set_root(std::string var) { root_ = std::move(var); }
    // Returns false if the variable already exists.
    bool add_node(const std::string& var, std::string concept_label);
    void add_edge(std::string source, std::string relation, std::string target,
                  double weight = 1.0);
    void add_attribute(std::string source, std::string relation, std::string value);
    void add_metadata(std::string key, std::string value);

    // Checks all structural invariants: root defined, endpoints defined,
    // nonempty concepts, connectivity from the root (undirected).
    // Throws DataError on violation.
    void validate() const;

    const std::string& root() const { return root_; }
    std::size_t node_count() const { return vars_.size(); }
    const std::vector<std::string>& vars() const { return vars_; }
    bool has_node(const std::string& var) const { return index_.count(var) > 0; }
    const std::string& concept_of(const std::string& var) const;
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Attribute>& attributes() const { return attributes_; }

    // Metadata lines (`# ::key value`) in file order; unknown keys are kept
    // verbatim.
    const std::vector<std::pair<std::string, std::string>>& metadata() const {
        return metadata_;
    }
    // Convenience accessors for the `::id` / `::snt` keys; empty if absent.
    std::string id() const { return meta_value("id"); }
    std::string sentence() const { return meta_value("snt"); }

    // Renames every variable through the given map (must be a bijection on
    // the variable set). Used by tests and the serializer.
    AmrGraph renamed(const std::unordered_map<std::string, std::string>& mapping) const;

private:
    std::string meta_value(const std::string& key) const;

    std::string root_;
    std::vector<std::string> vars_;                       // insertion order
    std::unordered_map<std::string, std::size_t> index_;  // var -> position
    std::vector<std::string> concepts_;                   // parallel to vars_
    std::vector<Edge> edges_;
    std::vector<Attribute> attributes_;
    std::vector<std::pair<std::string, std::string>> metadata_;
};

enum class TripleKind { Instance, Attribute, Relation };

// Atomic Smatch-style unit.
//   Instance:  relation="instance", first=var,    second=concept
//   Attribute: relation=<label>,    first=var,    second=constant
//   Relation:  relation=<label>,    first=source, second=target
struct Triple {
    TripleKind kind;
    std::string relation;
    std::string first;
    std::string second;

    auto operator<=>(const Triple&) const = default;
};

inline constexpr const char* kTopRelation = "TOP";

// One instance triple per node, one relation triple per edge, one attribute
// triple per attribute, plus the synthetic (TOP, root, root-concept)
// attribute triple. Order: instances, TOP, attributes, relations.
std::vector<Triple> to_triples(const AmrGraph& g);

// Sorted, deterministic one-line rendering, e.g. "ARG1(l, f)".
std::string triple_to_string(const Triple& t);

// Label placed on the two edges that replace a labeled edge in the
// edge-to-node transform.
inline constexpr const char* kE2nEdgeLabel = "e2n";

// Rewrites every labeled edge (x, r, z) into a fresh node y with concept r
// and unlabeled edges x->y, y->z (Levi-style). Attributes are rewritten the
// same way with the constant materialized as a leaf node. All edge weights
// in the result are 1.0. Fresh variable names come from a counter, so the
// transform is deterministic.
AmrGraph edge_to_node_transform(const AmrGraph& g);

// Alternating node/edge label sequence of length 2k-1.
struct KGram {
    std::vector<std::string> tokens;

    auto operator<=>(const KGram&) const = default;
    std::string to_string() const;
};

// Bag of all directed k-node paths that start at a variable node and follow
// outgoing edges (attribute constants act as leaf continuations), with a
// no-repeated-node guard. k=1 yields the concept-label multiset. k in 1..3.
std::map<KGram, std::size_t> extract_kgrams(const AmrGraph& g, int k);

// Uniform node/adjacency view used by the kernel metrics: variables plus
// attribute constants as leaf nodes, adjacency over both edge directions.
struct ViewNode {
    std::string label;
    bool is_constant = false;
};

struct ViewArc {
    std::size_t neighbor;
    std::string label;
    double weight;
    bool outgoing;
};

class LabeledView {
public:
    explicit LabeledView(const AmrGraph& g);

    std::size_t size() const { return nodes_.size(); }
    std::size_t variable_count() const { return variable_count_; }
    const ViewNode& node(std::size_t i) const { return nodes_[i]; }
    const std::vector<ViewArc>& arcs(std::size_t i) const { return adj_[i]; }
    // Outgoing arcs only, in insertion order (used by k-gram extraction).
    const std::vector<ViewArc>& out_arcs(std::size_t i) const { return out_[i]; }

private:
    std::vector<ViewNode> nodes_;
    std::vector<std::vector<ViewArc>> adj_;
    std::vector<std::vector<ViewArc>> out_;
    std::size_t variable_count_ = 0;
};

}  // namespace amreval
