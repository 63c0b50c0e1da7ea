#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shr/hypergraph.hpp"
#include "shr/production.hpp"

namespace shr {

/// How synchronization conditions meeting at a node must line up.
enum class SyncPolicy {
    Milner,    // exactly one output/input pair; other tentacles stay idle
    Broadcast, // one output consumed by inputs on every other attached tentacle
};

const char* to_string(SyncPolicy p);

/// Why a node rejects the conditions proposed at it.
enum class NodeCheckError {
    TooManyOutputs,
    ActionNameMismatch,
    UnmatchedInput,
    IdleBystanderInBroadcast,
};

const char* to_string(NodeCheckError e);

struct NodeCheck {
    bool ok = false;
    bool synchronizing = false; // false when every tentacle is idle
    std::optional<NodeCheckError> error;
    // Indices into the condition list given to check_node; meaningful only
    // when synchronizing.
    std::size_t output_index = 0;
    std::vector<std::size_t> input_indices;
};

/// One tentacle's proposal at a node: the condition plus where it came from.
struct NodeCondition {
    EdgeId edge;
    std::size_t tentacle = 0;
    GroundCondition condition;
};

/// A choice of production per edge; edges absent from the map stay idle.
using Assignment = std::map<EdgeId, const Production*>;

/// Grounds the assigned productions and gathers, per node, the conditions
/// their tentacles propose there, in (edge id, tentacle index) order. The
/// instantiated rules are handed back through `rules_out` when the caller
/// also needs the grounded right-hand sides.
std::map<NodeId, std::vector<NodeCondition>> collect_conditions(
    const Hypergraph& graph, const Assignment& assignment, FreshNodeAllocator& alloc,
    std::vector<InstantiatedRule>* rules_out = nullptr);

/// Decides whether the conditions gathered at one node synchronize under
/// the policy. `attached_count` is the node's total tentacle count in the
/// source graph (idle tentacles included), which Broadcast needs to insist
/// every listener takes part.
NodeCheck check_node(const std::vector<NodeCondition>& conditions,
                     std::size_t attached_count, SyncPolicy policy);

/// Node fusion induced by communicated vectors. Merging two distinct
/// pre-existing nodes is outside the supported fragment, hence rejected.
struct UnifyResult {
    bool ok = false;
    NodeSubstitution fusion; // merged node -> representative
};

/// Unifies pairwise-equated nodes. `is_pre_existing` tells fresh nodes
/// apart; representatives prefer pre-existing nodes and otherwise the
/// smallest fresh id.
UnifyResult unify(const std::vector<std::pair<NodeId, NodeId>>& equations,
                  const std::function<bool(const NodeId&)>& is_pre_existing);

/// A complete synchronized rewriting step.
struct FiredSync {
    NodeId node;            // where the synchronization happened
    ActionSig action;
    EdgeId output_edge;
    std::vector<EdgeId> input_edges;
};

struct Transition {
    std::map<EdgeId, std::string> assignment; // edge -> production name, "" = idle
    std::vector<FiredSync> fired;             // node id order
    NodeSubstitution fusion;
    Hypergraph result;
    Hypergraph source; // snapshot guarding apply() against stale transitions
};

/// Enumerates every applicable synchronized step, deterministically:
/// assignments are explored in lexicographic order over edges sorted by id,
/// with the idle production before named productions sorted by name. The
/// all-idle assignment is not a step.
std::vector<Transition> applicable_steps(const Hypergraph& graph,
                                         const ProductionRegistry& registry,
                                         SyncPolicy policy);

/// Returns the transition's result; throws Error(StaleTransition) when the
/// graph no longer equals the transition's source snapshot.
Hypergraph apply(const Hypergraph& graph, const Transition& t);

/// Picks among enumerated transitions; the default chooser takes index 0.
using Chooser = std::function<std::size_t(const std::vector<Transition>&)>;

struct TraceStep {
    std::size_t step = 0;
    std::map<EdgeId, std::string> assignment;
    std::vector<FiredSync> fired;
    NodeSubstitution fusion;
    std::string result_digest;
};

struct Trace {
    std::string initial_digest;
    std::vector<TraceStep> steps;
    Hypergraph final_graph;
    bool reached_quiescence = false;
};

/// Rewrites until no step applies or `max_steps` have been taken.
Trace run(const Hypergraph& graph, const ProductionRegistry& registry, SyncPolicy policy,
          std::size_t max_steps, const Chooser& choose = {});

/// FNV-1a 64 over the canonical DSL text of the graph, rendered as
/// "fnv1a64:" + 16 lowercase hex digits.
std::string graph_digest(const Hypergraph& graph);

/// One JSON object (single line, no trailing newline) describing the step.
std::string trace_step_json(const TraceStep& step);

} // namespace shr
