#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shr/diagnostics.hpp"
#include "shr/engine.hpp"
#include "shr/gcm.hpp"
#include "shr/hypergraph.hpp"

namespace shr {

/// Structural guards over the current graph.
enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };

const char* to_string(Cmp c);
bool compare(std::size_t lhs, Cmp c, std::size_t rhs);

struct Guard;
using GuardPtr = std::shared_ptr<const Guard>;

struct Guard {
    enum class Kind { Count, Exists, And, Or, Not } kind = Kind::Count;

    // Count: number of edges labelled `label` compared against `value`.
    std::string label;
    Cmp cmp = Cmp::Eq;
    std::size_t value = 0;

    // Exists: some edge labelled `label` has the node displayed as
    // `display` at tentacle `tentacle`.
    std::size_t tentacle = 0;
    std::string display;

    // And/Or take both children; Not takes `lhs` only.
    GuardPtr lhs;
    GuardPtr rhs;
};

GuardPtr guard_count(std::string label, Cmp cmp, std::size_t value);
GuardPtr guard_exists(std::string label, std::size_t tentacle, std::string display);
GuardPtr guard_and(GuardPtr a, GuardPtr b);
GuardPtr guard_or(GuardPtr a, GuardPtr b);
GuardPtr guard_not(GuardPtr a);

bool evaluate_guard(const Guard& g, const Hypergraph& graph);

/// Adaptation operations a policy rule can request.
enum class GcmOp { Go, Start, RepShare, RepFresh, Copy, Kill };

const char* to_string(GcmOp op);
ActionSig op_action(GcmOp op);

/// Argument for one communicated slot of the operation's action.
struct OpArg {
    enum class Kind { Tentacle, Fresh } kind = Kind::Fresh;
    std::size_t tentacle = 0; // manager tentacle to forward, when Tentacle
};

/// when <event> if <guard> then <op>(target <edge>; <args>).
struct PolicyRule {
    std::string event;
    GuardPtr guard; // null = always
    GcmOp op = GcmOp::Go;
    std::string target; // declared edge name, or "<label>#<ordinal>"
    std::vector<OpArg> args;
};

bool guard_equals(const GuardPtr& a, const GuardPtr& b);
bool operator==(const OpArg& a, const OpArg& b);
bool operator==(const PolicyRule& a, const PolicyRule& b);

/// An occurrence reported to the manager. Guards are structural, so the
/// payload is carried opaquely for the caller's own use.
struct Event {
    std::string name;
    std::map<std::string, std::string> payload;
};

/// A rule whose event fired and whose guard held, resolved to concrete
/// edges: the manager edge that will emit and the component edge expected
/// to react.
struct ArmedEmission {
    const PolicyRule* rule = nullptr;
    EdgeId manager_edge;
    EdgeId target_edge;
    Production emitter;                 // pinned to manager_edge
    std::vector<Production> receivers;  // op receiver, plus store half for Copy
};

struct EvaluationResult {
    std::vector<ArmedEmission> armed;
    std::vector<Diagnostic> diagnostics; // unresolved targets etc.; not fatal
};

/// The engine productions reacting to an operation's action (the store's
/// half rides along for Copy).
std::vector<Production> op_receivers(GcmOp op);

/// Matches the event against the rules over the current graph. `edge_names`
/// resolves declared edge names; "<label>#<k>" picks the k-th edge with that
/// label in edge id order. A target without a manager on its tentacle 0, or
/// with no such edge at all, yields a diagnostic instead of an emission.
EvaluationResult evaluate(const std::vector<PolicyRule>& rules, const Event& event,
                          const Hypergraph& graph,
                          const std::map<EdgeId, std::string>& edge_names);

/// Transitions reachable with the armed emissions: the registry is extended
/// with the emitters (pinned to their managers) and the receiver
/// productions, and only transitions actually firing an armed emitter are
/// kept. Under Milner the operation's receiver is pinned to the resolved
/// target edge; under Broadcast it stays unpinned so every listener on the
/// port reacts.
std::vector<Transition> policy_transitions(const Hypergraph& graph,
                                           const ProductionRegistry& base,
                                           const std::vector<ArmedEmission>& armed,
                                           SyncPolicy policy);

/// Evaluates the event and takes the first armed transition, if any.
struct PolicyStepResult {
    bool stepped = false;
    Transition transition; // meaningful when stepped
};

PolicyStepResult step_with_policy(const Hypergraph& graph, const std::vector<PolicyRule>& rules,
                                  const Event& event, const ProductionRegistry& base,
                                  SyncPolicy policy,
                                  const std::map<EdgeId, std::string>& edge_names);

} // namespace shr
