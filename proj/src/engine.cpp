#include "shr/engine.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

#include <nlohmann/json.hpp>

namespace shr {

const char* to_string(SyncPolicy p) {
    switch (p) {
    case SyncPolicy::Milner: return "milner";
    case SyncPolicy::Broadcast: return "broadcast";
    }
    return "?";
}

const char* to_string(NodeCheckError e) {
    switch (e) {
    case NodeCheckError::TooManyOutputs: return "more than one output at the node";
    case NodeCheckError::ActionNameMismatch: return "actions at the node disagree";
    case NodeCheckError::UnmatchedInput: return "a participant lacks its partner";
    case NodeCheckError::IdleBystanderInBroadcast:
        return "a tentacle stays idle during a broadcast";
    }
    return "?";
}

NodeCheck check_node(const std::vector<NodeCondition>& conditions, std::size_t attached_count,
                     SyncPolicy policy) {
    std::vector<std::size_t> outputs;
    std::vector<std::size_t> inputs;
    for (std::size_t i = 0; i < conditions.size(); ++i) {
        switch (conditions[i].condition.polarity) {
        case Polarity::Output: outputs.push_back(i); break;
        case Polarity::Input: inputs.push_back(i); break;
        case Polarity::Idle: break;
        }
    }

    NodeCheck check;
    if (outputs.empty() && inputs.empty()) {
        check.ok = true;
        return check;
    }
    if (outputs.size() > 1) {
        check.error = NodeCheckError::TooManyOutputs;
        return check;
    }
    if (outputs.empty()) {
        check.error = NodeCheckError::UnmatchedInput;
        return check;
    }

    const ActionSig& offered = conditions[outputs.front()].condition.action;
    for (std::size_t i : inputs) {
        if (!(conditions[i].condition.action == offered)) {
            check.error = NodeCheckError::ActionNameMismatch;
            return check;
        }
    }

    switch (policy) {
    case SyncPolicy::Milner:
        if (inputs.size() != 1) {
            check.error = NodeCheckError::UnmatchedInput;
            return check;
        }
        break;
    case SyncPolicy::Broadcast: {
        const std::size_t listeners = attached_count - 1;
        if (inputs.size() < listeners) {
            check.error = NodeCheckError::IdleBystanderInBroadcast;
            return check;
        }
        if (inputs.size() > listeners) {
            check.error = NodeCheckError::UnmatchedInput;
            return check;
        }
        break;
    }
    }

    check.ok = true;
    check.synchronizing = true;
    check.output_index = outputs.front();
    check.input_indices = inputs;
    return check;
}

namespace {

// Union-find keyed by node id, keeping full NodeId values for the output.
class NodeUnion {
public:
    void ensure(const NodeId& n) {
        if (!parent_.count(n.id)) {
            parent_.emplace(n.id, n.id);
            node_.emplace(n.id, n);
        }
    }

    std::uint32_t find(std::uint32_t id) {
        std::uint32_t root = id;
        while (parent_.at(root) != root) root = parent_.at(root);
        while (parent_.at(id) != root) {
            std::uint32_t next = parent_.at(id);
            parent_.at(id) = root;
            id = next;
        }
        return root;
    }

    void unite(const NodeId& a, const NodeId& b) {
        ensure(a);
        ensure(b);
        std::uint32_t ra = find(a.id);
        std::uint32_t rb = find(b.id);
        if (ra != rb) parent_.at(rb) = ra;
    }

    std::map<std::uint32_t, std::vector<NodeId>> classes() {
        std::map<std::uint32_t, std::vector<NodeId>> out;
        for (const auto& [id, node] : node_) out[find(id)].push_back(node);
        return out;
    }

private:
    std::map<std::uint32_t, std::uint32_t> parent_;
    std::map<std::uint32_t, NodeId> node_;
};

} // namespace

UnifyResult unify(const std::vector<std::pair<NodeId, NodeId>>& equations,
                  const std::function<bool(const NodeId&)>& is_pre_existing) {
    NodeUnion dsu;
    for (const auto& [a, b] : equations) dsu.unite(a, b);

    UnifyResult result;
    for (auto& [root, members] : dsu.classes()) {
        std::vector<NodeId> existing;
        for (const auto& n : members) {
            if (is_pre_existing(n)) existing.push_back(n);
        }
        if (existing.size() > 1) return result; // two distinct graph nodes would merge
        NodeId representative;
        if (existing.size() == 1) {
            representative = existing.front();
        } else {
            representative = *std::min_element(members.begin(), members.end());
        }
        for (const auto& n : members) {
            if (!(n == representative)) result.fusion.emplace(n, representative);
        }
    }
    result.ok = true;
    return result;
}

std::map<NodeId, std::vector<NodeCondition>> collect_conditions(
    const Hypergraph& graph, const Assignment& assignment, FreshNodeAllocator& alloc,
    std::vector<InstantiatedRule>* rules_out) {
    std::map<NodeId, std::vector<NodeCondition>> at_node;
    for (const auto& [edge_id, production] : assignment) {
        if (production == nullptr) continue;
        InstantiatedRule rule = instantiate(*production, graph, edge_id, alloc);
        const Hyperedge* e = graph.find_edge(edge_id);
        for (const auto& [index, cond] : rule.conditions) {
            if (cond.polarity == Polarity::Idle) continue;
            at_node[e->tentacles[index]].push_back(NodeCondition{edge_id, index, cond});
        }
        if (rules_out) rules_out->push_back(std::move(rule));
    }
    return at_node;
}

namespace {

// Builds the transition for one complete production assignment, or nothing
// when synchronization or fusion rejects it.
std::optional<Transition> realize(const Hypergraph& graph,
                                  const std::vector<const Hyperedge*>& edges,
                                  const std::vector<const Production*>& choice,
                                  SyncPolicy policy) {
    Assignment assignment;
    bool any_active = false;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (choice[i] == nullptr) continue;
        any_active = true;
        assignment.emplace(edges[i]->id, choice[i]);
    }
    if (!any_active) return std::nullopt;

    FreshNodeAllocator alloc(graph.next_node_id());
    std::vector<InstantiatedRule> rules;
    auto at_node = collect_conditions(graph, assignment, alloc, &rules);

    std::vector<FiredSync> fired;
    std::vector<std::pair<NodeId, NodeId>> equations;
    for (const auto& [node, conds] : at_node) {
        NodeCheck check = check_node(conds, graph.attached(node).size(), policy);
        if (!check.ok) return std::nullopt;
        if (!check.synchronizing) continue;

        const NodeCondition& out_cond = conds[check.output_index];
        FiredSync sync;
        sync.node = node;
        sync.action = out_cond.condition.action;
        sync.output_edge = out_cond.edge;
        for (std::size_t i : check.input_indices) {
            sync.input_edges.push_back(conds[i].edge);
            const auto& sent = out_cond.condition.comm;
            const auto& received = conds[i].condition.comm;
            for (std::size_t p = 0; p < sent.size(); ++p) {
                equations.emplace_back(sent[p], received[p]);
            }
        }
        std::sort(sync.input_edges.begin(), sync.input_edges.end());
        fired.push_back(std::move(sync));
    }

    const std::uint32_t first_fresh = graph.next_node_id();
    UnifyResult fusion = unify(equations, [first_fresh](const NodeId& n) {
        return n.id < first_fresh;
    });
    if (!fusion.ok) return std::nullopt;

    auto resolve = [&fusion](const NodeId& n) -> NodeId {
        auto it = fusion.fusion.find(n);
        return it == fusion.fusion.end() ? n : it->second;
    };

    Transition t;
    t.fired = std::move(fired);
    t.fusion = fusion.fusion;
    t.source = graph;

    std::set<std::uint32_t> rewritten;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        t.assignment.emplace(edges[i]->id, choice[i] ? choice[i]->name : std::string());
        if (choice[i]) rewritten.insert(edges[i]->id.id);
    }

    Hypergraph& result = t.result;
    for (const auto& n : graph.nodes()) result.insert_node(resolve(n));
    for (const auto& rule : rules) {
        for (const auto& n : rule.rhs_nodes) result.insert_node(resolve(n));
    }
    for (const auto& e : graph.edges()) {
        if (rewritten.count(e.id.id)) continue;
        Hyperedge kept = e;
        for (auto& tent : kept.tentacles) tent = resolve(tent);
        result.insert_edge(kept);
    }
    std::uint32_t next_edge = graph.next_edge_id();
    for (const auto& rule : rules) {
        for (const auto& ge : rule.rhs_edges) {
            Hyperedge fresh;
            fresh.id = EdgeId{next_edge++};
            fresh.label = ge.label;
            for (const auto& tent : ge.tentacles) {
                NodeId n = resolve(tent);
                result.insert_node(n);
                fresh.tentacles.push_back(n);
            }
            result.insert_edge(fresh);
        }
    }
    return t;
}

} // namespace

std::vector<Transition> applicable_steps(const Hypergraph& graph,
                                         const ProductionRegistry& registry,
                                         SyncPolicy policy) {
    std::vector<const Hyperedge*> edges;
    edges.reserve(graph.edges().size());
    for (const auto& e : graph.edges()) edges.push_back(&e);

    // Idle first, then candidates in name order: the odometer below then
    // emits assignments in lexicographic order over edges sorted by id.
    std::vector<std::vector<const Production*>> options(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        options[i].push_back(nullptr);
        for (const Production* p : registry.candidates(*edges[i])) options[i].push_back(p);
    }

    std::vector<Transition> out;
    if (edges.empty()) return out;

    std::vector<std::size_t> pick(edges.size(), 0);
    std::vector<const Production*> choice(edges.size(), nullptr);
    while (true) {
        for (std::size_t i = 0; i < edges.size(); ++i) choice[i] = options[i][pick[i]];
        if (auto t = realize(graph, edges, choice, policy)) out.push_back(std::move(*t));

        std::size_t i = edges.size();
        while (i > 0) {
            --i;
            if (++pick[i] < options[i].size()) break;
            pick[i] = 0;
            if (i == 0) return out;
        }
    }
}

Hypergraph apply(const Hypergraph& graph, const Transition& t) {
    if (!(graph == t.source)) {
        throw Error(ErrorCode::StaleTransition,
                    "the graph changed since this transition was enumerated");
    }
    return t.result;
}

Trace run(const Hypergraph& graph, const ProductionRegistry& registry, SyncPolicy policy,
          std::size_t max_steps, const Chooser& choose) {
    Trace trace;
    trace.initial_digest = graph_digest(graph);
    Hypergraph current = graph;
    while (trace.steps.size() < max_steps) {
        std::vector<Transition> steps = applicable_steps(current, registry, policy);
        if (steps.empty()) {
            trace.reached_quiescence = true;
            break;
        }
        std::size_t index = choose ? choose(steps) : 0;
        if (index >= steps.size()) {
            throw Error(ErrorCode::IndexOutOfRange,
                        "chooser picked transition " + std::to_string(index) + " of " +
                            std::to_string(steps.size()));
        }
        const Transition& t = steps[index];
        TraceStep record;
        record.step = trace.steps.size();
        record.assignment = t.assignment;
        record.fired = t.fired;
        record.fusion = t.fusion;
        current = t.result;
        record.result_digest = graph_digest(current);
        trace.steps.push_back(std::move(record));
    }
    if (!trace.reached_quiescence) {
        trace.reached_quiescence = applicable_steps(current, registry, policy).empty();
    }
    trace.final_graph = std::move(current);
    return trace;
}

std::string graph_digest(const Hypergraph& graph) {
    const std::string text = canonical_text(graph);
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string digest = "fnv1a64:";
    for (int shift = 60; shift >= 0; shift -= 4) {
        digest.push_back(hex[(hash >> shift) & 0xF]);
    }
    return digest;
}

std::string trace_step_json(const TraceStep& step) {
    nlohmann::ordered_json j;
    j["step"] = step.step;

    nlohmann::ordered_json assignment = nlohmann::ordered_json::object();
    for (const auto& [edge, name] : step.assignment) {
        if (name.empty()) continue; // idle edges are implicit
        assignment["e" + std::to_string(edge.id)] = name;
    }
    j["assignment"] = std::move(assignment);

    auto node_json = [](const NodeId& n) {
        nlohmann::ordered_json out;
        out["id"] = n.id;
        out["name"] = n.display_name;
        return out;
    };

    nlohmann::ordered_json fired = nlohmann::ordered_json::array();
    for (const auto& sync : step.fired) {
        nlohmann::ordered_json f;
        f["node"] = node_json(sync.node);
        f["action"] = sync.action.name;
        f["output"] = "e" + std::to_string(sync.output_edge.id);
        nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
        for (EdgeId e : sync.input_edges) inputs.push_back("e" + std::to_string(e.id));
        f["inputs"] = std::move(inputs);
        fired.push_back(std::move(f));
    }
    j["fired"] = std::move(fired);

    nlohmann::ordered_json fusion = nlohmann::ordered_json::array();
    for (const auto& [from, to] : step.fusion) {
        nlohmann::ordered_json pair;
        pair["from"] = node_json(from);
        pair["to"] = node_json(to);
        fusion.push_back(std::move(pair));
    }
    j["fusion"] = std::move(fusion);

    j["result_digest"] = step.result_digest;
    return j.dump();
}

} // namespace shr
