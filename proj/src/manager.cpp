#include "shr/manager.hpp"

#include <algorithm>
#include <set>

namespace shr {

const char* to_string(Cmp c) {
    switch (c) {
    case Cmp::Eq: return "==";
    case Cmp::Ne: return "!=";
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
    }
    return "?";
}

bool compare(std::size_t lhs, Cmp c, std::size_t rhs) {
    switch (c) {
    case Cmp::Eq: return lhs == rhs;
    case Cmp::Ne: return lhs != rhs;
    case Cmp::Lt: return lhs < rhs;
    case Cmp::Le: return lhs <= rhs;
    case Cmp::Gt: return lhs > rhs;
    case Cmp::Ge: return lhs >= rhs;
    }
    return false;
}

GuardPtr guard_count(std::string label, Cmp cmp, std::size_t value) {
    auto g = std::make_shared<Guard>();
    g->kind = Guard::Kind::Count;
    g->label = std::move(label);
    g->cmp = cmp;
    g->value = value;
    return g;
}

GuardPtr guard_exists(std::string label, std::size_t tentacle, std::string display) {
    auto g = std::make_shared<Guard>();
    g->kind = Guard::Kind::Exists;
    g->label = std::move(label);
    g->tentacle = tentacle;
    g->display = std::move(display);
    return g;
}

GuardPtr guard_and(GuardPtr a, GuardPtr b) {
    auto g = std::make_shared<Guard>();
    g->kind = Guard::Kind::And;
    g->lhs = std::move(a);
    g->rhs = std::move(b);
    return g;
}

GuardPtr guard_or(GuardPtr a, GuardPtr b) {
    auto g = std::make_shared<Guard>();
    g->kind = Guard::Kind::Or;
    g->lhs = std::move(a);
    g->rhs = std::move(b);
    return g;
}

GuardPtr guard_not(GuardPtr a) {
    auto g = std::make_shared<Guard>();
    g->kind = Guard::Kind::Not;
    g->lhs = std::move(a);
    return g;
}

bool evaluate_guard(const Guard& g, const Hypergraph& graph) {
    switch (g.kind) {
    case Guard::Kind::Count: {
        std::size_t count = 0;
        for (const auto& e : graph.edges()) {
            if (e.label.name == g.label) ++count;
        }
        return compare(count, g.cmp, g.value);
    }
    case Guard::Kind::Exists:
        for (const auto& e : graph.edges()) {
            if (e.label.name != g.label) continue;
            if (g.tentacle >= e.tentacles.size()) continue;
            if (e.tentacles[g.tentacle].display_name == g.display) return true;
        }
        return false;
    case Guard::Kind::And: return evaluate_guard(*g.lhs, graph) && evaluate_guard(*g.rhs, graph);
    case Guard::Kind::Or: return evaluate_guard(*g.lhs, graph) || evaluate_guard(*g.rhs, graph);
    case Guard::Kind::Not: return !evaluate_guard(*g.lhs, graph);
    }
    return false;
}

bool guard_equals(const GuardPtr& a, const GuardPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case Guard::Kind::Count:
        return a->label == b->label && a->cmp == b->cmp && a->value == b->value;
    case Guard::Kind::Exists:
        return a->label == b->label && a->tentacle == b->tentacle && a->display == b->display;
    case Guard::Kind::And:
    case Guard::Kind::Or:
        return guard_equals(a->lhs, b->lhs) && guard_equals(a->rhs, b->rhs);
    case Guard::Kind::Not: return guard_equals(a->lhs, b->lhs);
    }
    return false;
}

bool operator==(const OpArg& a, const OpArg& b) {
    if (a.kind != b.kind) return false;
    return a.kind != OpArg::Kind::Tentacle || a.tentacle == b.tentacle;
}

bool operator==(const PolicyRule& a, const PolicyRule& b) {
    return a.event == b.event && guard_equals(a.guard, b.guard) && a.op == b.op &&
           a.target == b.target && a.args == b.args;
}

const char* to_string(GcmOp op) {
    switch (op) {
    case GcmOp::Go: return "go";
    case GcmOp::Start: return "start";
    case GcmOp::RepShare: return "rep_share";
    case GcmOp::RepFresh: return "rep_fresh";
    case GcmOp::Copy: return "copy";
    case GcmOp::Kill: return "kill";
    }
    return "?";
}

ActionSig op_action(GcmOp op) {
    switch (op) {
    case GcmOp::Go: return gcm::go_action;
    case GcmOp::Start: return gcm::start_action;
    case GcmOp::RepShare: return gcm::rep_action;
    case GcmOp::RepFresh: return gcm::rep_sigma_action;
    case GcmOp::Copy: return gcm::copy_action;
    case GcmOp::Kill: return gcm::kill_action;
    }
    return {};
}

std::vector<Production> op_receivers(GcmOp op) {
    switch (op) {
    case GcmOp::Go: return {gcm::go()};
    case GcmOp::Start: return {gcm::start()};
    case GcmOp::RepShare: return {gcm::rep_share()};
    case GcmOp::RepFresh: return {gcm::rep_fresh()};
    case GcmOp::Copy: return {gcm::copy(), gcm::store_rep()};
    case GcmOp::Kill: return {gcm::kill()};
    }
    return {};
}

namespace {

Diagnostic rule_diag(std::string code, std::string message) {
    Diagnostic d;
    d.code = std::move(code);
    d.message = std::move(message);
    return d;
}

// Resolves "name" or "label#k" to an edge of the graph.
const Hyperedge* resolve_target(const std::string& target, const Hypergraph& graph,
                                const std::map<EdgeId, std::string>& edge_names) {
    auto hash = target.find('#');
    if (hash != std::string::npos) {
        const std::string label = target.substr(0, hash);
        std::size_t ordinal = 0;
        try {
            ordinal = std::stoul(target.substr(hash + 1));
        } catch (...) {
            return nullptr;
        }
        std::size_t seen = 0;
        for (const auto& e : graph.edges()) {
            if (e.label.name != label) continue;
            if (seen++ == ordinal) return &e;
        }
        return nullptr;
    }
    for (const auto& [id, name] : edge_names) {
        if (name == target) return graph.find_edge(id);
    }
    return nullptr;
}

} // namespace

EvaluationResult evaluate(const std::vector<PolicyRule>& rules, const Event& event,
                          const Hypergraph& graph,
                          const std::map<EdgeId, std::string>& edge_names) {
    EvaluationResult result;
    for (const auto& rule : rules) {
        if (rule.event != event.name) continue;
        if (rule.guard && !evaluate_guard(*rule.guard, graph)) continue;

        const Hyperedge* target = resolve_target(rule.target, graph, edge_names);
        if (target == nullptr) {
            result.diagnostics.push_back(rule_diag(
                "TARGET_UNRESOLVED", "rule for event '" + rule.event + "': target '" +
                                         rule.target + "' matches no edge"));
            continue;
        }
        if (!(target->label == gcm::component_label)) {
            result.diagnostics.push_back(rule_diag(
                "TARGET_NOT_COMPONENT", "rule for event '" + rule.event + "': target '" +
                                            rule.target + "' is not a component edge"));
            continue;
        }

        // The emitting manager shares the target's manager-port node.
        const NodeId& port = target->tentacles[0];
        const Hyperedge* manager = nullptr;
        for (const auto& e : graph.edges()) {
            if (!(e.label == gcm::manager_label)) continue;
            if (e.tentacles[0].id == port.id) {
                manager = &e;
                break;
            }
        }
        if (manager == nullptr) {
            result.diagnostics.push_back(rule_diag(
                "TARGET_HAS_NO_MANAGER", "rule for event '" + rule.event + "': target '" +
                                             rule.target +
                                             "' has no manager on its port node"));
            continue;
        }

        std::vector<gcm::CommSlot> slots;
        for (const auto& arg : rule.args) {
            gcm::CommSlot slot;
            if (arg.kind == OpArg::Kind::Tentacle) {
                slot.kind = gcm::CommSlot::Kind::Existing;
                slot.tentacle = arg.tentacle;
            } else {
                slot.kind = gcm::CommSlot::Kind::Fresh;
            }
            slots.push_back(slot);
        }

        ArmedEmission armed;
        armed.rule = &rule;
        armed.manager_edge = manager->id;
        armed.target_edge = target->id;
        try {
            armed.emitter = gcm::am_emitter(op_action(rule.op), slots);
        } catch (const Error& e) {
            result.diagnostics.push_back(
                rule_diag("OP_ARGS_ARITY", "rule for event '" + rule.event + "': " + e.what()));
            continue;
        }
        armed.receivers = op_receivers(rule.op);
        result.armed.push_back(std::move(armed));
    }
    return result;
}

std::vector<Transition> policy_transitions(const Hypergraph& graph,
                                           const ProductionRegistry& base,
                                           const std::vector<ArmedEmission>& armed,
                                           SyncPolicy policy) {
    ProductionRegistry extended = base;
    std::set<std::pair<std::string, std::uint32_t>> pinned_added;
    std::set<std::string> unpinned_added;
    auto add_pinned = [&](const Production& p, EdgeId pin) {
        if (pinned_added.emplace(p.name, pin.id).second) extended.add(p, pin);
    };
    auto add_unpinned = [&](const Production& p) {
        if (base.has(p.name)) return; // spec-file production takes precedence
        if (unpinned_added.insert(p.name).second) extended.add(p);
    };

    for (const auto& emission : armed) {
        add_pinned(emission.emitter, emission.manager_edge);
        for (std::size_t i = 0; i < emission.receivers.size(); ++i) {
            const Production& receiver = emission.receivers[i];
            if (base.has(receiver.name)) continue;
            // The operation's own receiver reacts at the chosen target under
            // Milner; Broadcast keeps it open so every listener takes part.
            if (i == 0 && policy == SyncPolicy::Milner) {
                add_pinned(receiver, emission.target_edge);
            } else {
                add_unpinned(receiver);
            }
        }
    }

    std::vector<Transition> all = applicable_steps(graph, extended, policy);
    std::vector<Transition> kept;
    for (auto& t : all) {
        bool fires_armed = false;
        for (const auto& emission : armed) {
            auto it = t.assignment.find(emission.manager_edge);
            if (it != t.assignment.end() && it->second == emission.emitter.name) {
                fires_armed = true;
                break;
            }
        }
        if (fires_armed) kept.push_back(std::move(t));
    }
    return kept;
}

PolicyStepResult step_with_policy(const Hypergraph& graph, const std::vector<PolicyRule>& rules,
                                  const Event& event, const ProductionRegistry& base,
                                  SyncPolicy policy,
                                  const std::map<EdgeId, std::string>& edge_names) {
    PolicyStepResult result;
    EvaluationResult armed = evaluate(rules, event, graph, edge_names);
    if (armed.armed.empty()) return result;
    std::vector<Transition> steps = policy_transitions(graph, base, armed.armed, policy);
    if (steps.empty()) return result;
    result.stepped = true;
    result.transition = std::move(steps.front());
    return result;
}

} // namespace shr
