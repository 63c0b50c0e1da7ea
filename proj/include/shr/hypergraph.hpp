#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "shr/error.hpp"

namespace shr {

/// Node identity. The numeric id is what identifies a node within a graph;
/// the display name is presentation only and may repeat (generated fresh
/// nodes reuse the "n#k" scheme without ever colliding on id).
struct NodeId {
    std::uint32_t id = 0;
    std::string display_name;

    friend bool operator==(const NodeId& a, const NodeId& b) { return a.id == b.id; }
    friend std::strong_ordering operator<=>(const NodeId& a, const NodeId& b) {
        return a.id <=> b.id;
    }
};

struct EdgeId {
    std::uint32_t id = 0;

    friend bool operator==(EdgeId a, EdgeId b) { return a.id == b.id; }
    friend std::strong_ordering operator<=>(EdgeId a, EdgeId b) { return a.id <=> b.id; }
};

/// Edge label. A label name binds to exactly one arity within a
/// specification; the graph and the production registry both enforce it.
struct Label {
    std::string name;
    std::size_t arity = 0;

    friend bool operator==(const Label&, const Label&) = default;
};

struct Hyperedge {
    EdgeId id;
    Label label;
    std::vector<NodeId> tentacles; // ordered; position encodes the port role

    friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

/// Node-to-node replacement map. Chains are resolved before application,
/// so {a->b, b->c} sends a to c.
using NodeSubstitution = std::map<NodeId, NodeId>;

/// A hypergraph value: a node set plus labelled hyperedges with ordered
/// tentacles. Values are cheap to copy at the scale this engine targets and
/// are treated as immutable once built; the rewriting engine copies rather
/// than mutates.
class Hypergraph {
public:
    NodeId add_node(std::string display_name);
    EdgeId add_edge(const Label& label, std::vector<NodeId> tentacles);

    /// Inserts a node that already carries an id (merging by id). Used when
    /// materializing fused/fresh nodes into a result graph and by tests.
    void insert_node(const NodeId& node);

    /// Inserts an edge preserving its id; throws on duplicate id, arity
    /// mismatch or unknown tentacle target.
    void insert_edge(const Hyperedge& edge);

    bool has_node(const NodeId& node) const;
    bool has_edge(EdgeId id) const;
    const Hyperedge* find_edge(EdgeId id) const;

    const std::vector<NodeId>& nodes() const { return nodes_; }
    const std::vector<Hyperedge>& edges() const { return edges_; }

    /// Every (edge, tentacle position) pair incident to the node, in
    /// ascending (edge id, position) order.
    std::vector<std::pair<EdgeId, std::size_t>> attached(const NodeId& node) const;

    /// Rewrites every tentacle target through the substitution closure,
    /// drops substituted nodes and retains their representatives.
    Hypergraph apply_substitution(const NodeSubstitution& subst) const;

    std::uint32_t next_node_id() const { return next_node_; }
    std::uint32_t next_edge_id() const { return next_edge_; }

    /// Exact structural equality: ids, display names, labels and tentacle
    /// order all match. Use is_isomorphic() for equality up to renaming.
    friend bool operator==(const Hypergraph& a, const Hypergraph& b);

private:
    const NodeId* find_node(std::uint32_t id) const;

    std::vector<NodeId> nodes_;    // sorted by id
    std::vector<Hyperedge> edges_; // sorted by id
    std::uint32_t next_node_ = 0;
    std::uint32_t next_edge_ = 0;
};

/// True iff a node bijection and a label/tentacle-order-preserving edge
/// bijection exist. Display names are ignored. Backtracking search with
/// label and incidence-signature pruning; intended for desk-scale graphs.
bool is_isomorphic(const Hypergraph& a, const Hypergraph& b);

/// Deterministic DOT rendering: nodes as points labelled with their display
/// names, each hyperedge as a box linked to its tentacle targets with the
/// tentacle position as the link label.
std::string to_dot(const Hypergraph& graph);

/// Deterministic textual form of the graph as a DSL `graph { ... }` block.
/// Display names are sanitized into unique identifiers; pass the spec's edge
/// name table to keep declared edge names in the output.
std::string canonical_text(const Hypergraph& graph,
                           const std::map<EdgeId, std::string>* edge_names = nullptr);

/// The unique identifier chosen for each node by canonical_text, in node id
/// order. Exposed so serializers and traces agree on naming.
std::vector<std::string> canonical_node_names(const Hypergraph& graph);

} // namespace shr
