#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shr/diagnostics.hpp"
#include "shr/hypergraph.hpp"

namespace shr {

enum class Polarity {
    Idle,   // no requirement at this tentacle
    Input,  // requires a matching output at the shared node
    Output, // offers the action at the shared node
};

const char* to_string(Polarity p);

/// Action signature: a synchronization name plus the length of the node
/// vector communicated alongside it. Like labels, an action name binds to a
/// single communication arity within a specification.
struct ActionSig {
    std::string name;
    std::size_t comm_arity = 0;

    friend bool operator==(const ActionSig&, const ActionSig&) = default;
};

/// Synchronization condition attached to one tentacle of a production's
/// left-hand side. `comm` names formal parameters or fresh nodes of the
/// production, in the order they are communicated.
struct Condition {
    Polarity polarity = Polarity::Idle;
    ActionSig action;
    std::vector<std::string> comm;

    friend bool operator==(const Condition&, const Condition&) = default;
};

/// Right-hand side described over names (formals and fresh declarations).
struct SchemaEdge {
    Label label;
    std::vector<std::string> tentacles;

    friend bool operator==(const SchemaEdge&, const SchemaEdge&) = default;
};

struct RhsSchema {
    std::vector<std::string> bare_nodes; // kept alive without any edge
    std::vector<SchemaEdge> edges;

    friend bool operator==(const RhsSchema&, const RhsSchema&) = default;
};

/// A synchronized replacement production: when an edge labelled `lhs_label`
/// fires this production, each tentacle listed in `conditions` takes part in
/// the synchronization at its node, and the edge is replaced by `rhs`.
struct Production {
    std::string name;
    Label lhs_label;
    std::vector<std::string> lhs_formals;  // one name per tentacle
    std::map<std::size_t, Condition> conditions; // tentacle index -> condition
    std::vector<std::string> fresh_names;  // declaration order
    RhsSchema rhs;

    friend bool operator==(const Production&, const Production&) = default;
};

/// Structural validation; returns every problem found rather than stopping
/// at the first.
std::vector<Diagnostic> validate(const Production& p);

/// Hands out node ids above everything in the source graph. Fresh nodes are
/// displayed as "n#0", "n#1", ... in allocation order within a step, so a
/// new allocator is created per candidate transition.
class FreshNodeAllocator {
public:
    explicit FreshNodeAllocator(std::uint32_t first_id) : next_(first_id) {}

    NodeId allocate();

private:
    std::uint32_t next_;
    std::uint32_t serial_ = 0;
};

/// Production grounded at a concrete edge: names are resolved to the edge's
/// actual tentacle nodes, fresh declarations to newly allocated nodes.
struct GroundEdge {
    Label label;
    std::vector<NodeId> tentacles;
};

struct GroundCondition {
    Polarity polarity = Polarity::Idle;
    ActionSig action;
    std::vector<NodeId> comm;
};

struct InstantiatedRule {
    EdgeId edge;
    const Production* production = nullptr;
    std::map<std::size_t, GroundCondition> conditions; // keyed as in the production
    std::vector<NodeId> rhs_nodes; // every node the rhs mentions, fresh included
    std::vector<GroundEdge> rhs_edges;
    std::vector<NodeId> fresh; // allocation order
};

/// Grounds `p` at `edge` of `graph`. Throws Error(LabelMismatch) when the
/// edge's label does not match the production's lhs.
InstantiatedRule instantiate(const Production& p, const Hypergraph& graph, EdgeId edge,
                             FreshNodeAllocator& alloc);

/// The do-nothing production for a label: no conditions, rhs re-creates the
/// edge unchanged. Named "idle_<label>".
Production idle_production(const Label& label);

/// Productions available to the engine, optionally pinned to a single edge.
/// A pinned entry is offered only at that edge; unpinned entries are offered
/// at every edge carrying their lhs label.
class ProductionRegistry {
public:
    void add(Production p, std::optional<EdgeId> pin = std::nullopt);

    /// Productions applicable to the edge, sorted by name. The idle
    /// production is not included; the engine inserts it explicitly.
    std::vector<const Production*> candidates(const Hyperedge& edge) const;

    const std::deque<Production>& all() const { return productions_; }
    bool has(const std::string& name) const;

    /// Cross-production checks: duplicate names, label arity clashes,
    /// action arity clashes; includes per-production validation.
    std::vector<Diagnostic> validate() const;

private:
    std::deque<Production> productions_; // stable storage; pointers handed out
    std::vector<std::optional<EdgeId>> pins_;
};

} // namespace shr
