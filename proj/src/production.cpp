#include "shr/production.hpp"

#include <algorithm>
#include <set>

namespace shr {

const char* to_string(Polarity p) {
    switch (p) {
    case Polarity::Idle: return "idle";
    case Polarity::Input: return "input";
    case Polarity::Output: return "output";
    }
    return "?";
}

namespace {

Diagnostic make(std::string code, std::string message) {
    Diagnostic d;
    d.code = std::move(code);
    d.message = std::move(message);
    return d;
}

} // namespace

std::vector<Diagnostic> validate(const Production& p) {
    std::vector<Diagnostic> out;
    const std::string where = "production '" + p.name + "'";

    if (p.lhs_formals.size() != p.lhs_label.arity) {
        out.push_back(make("LHS_FORMALS_ARITY",
                           where + ": lhs '" + p.lhs_label.name + "' has arity " +
                               std::to_string(p.lhs_label.arity) + " but " +
                               std::to_string(p.lhs_formals.size()) + " formals are given"));
    }

    std::set<std::string> known;
    for (const auto& f : p.lhs_formals) {
        if (!known.insert(f).second) {
            out.push_back(make("DUPLICATE_FORMAL", where + ": formal '" + f + "' repeats"));
        }
    }
    for (const auto& f : p.fresh_names) {
        if (known.count(f)) {
            out.push_back(make("FRESH_SHADOWS_FORMAL",
                               where + ": fresh node '" + f + "' shadows another name"));
        } else if (!known.insert(f).second) {
            out.push_back(
                make("FRESH_SHADOWS_FORMAL", where + ": fresh node '" + f + "' repeats"));
        }
    }

    std::map<std::string, std::size_t> action_arity;
    for (const auto& [index, cond] : p.conditions) {
        if (index >= p.lhs_label.arity) {
            out.push_back(make("CONDITION_INDEX_RANGE",
                               where + ": condition on tentacle " + std::to_string(index) +
                                   " but lhs arity is " + std::to_string(p.lhs_label.arity)));
        }
        if (cond.polarity == Polarity::Idle) {
            out.push_back(make("IDLE_CONDITION",
                               where + ": tentacle " + std::to_string(index) +
                                   " lists an explicit idle condition"));
            continue;
        }
        if (cond.comm.size() != cond.action.comm_arity) {
            out.push_back(make("COMM_ARITY_MISMATCH",
                               where + ": action '" + cond.action.name + "' communicates " +
                                   std::to_string(cond.action.comm_arity) + " nodes, got " +
                                   std::to_string(cond.comm.size())));
        }
        auto [it, inserted] = action_arity.emplace(cond.action.name, cond.action.comm_arity);
        if (!inserted && it->second != cond.action.comm_arity) {
            out.push_back(make("ACTION_ARITY_CLASH",
                               where + ": action '" + cond.action.name +
                                   "' used with two communication arities"));
        }
        for (const auto& name : cond.comm) {
            if (!known.count(name)) {
                out.push_back(make("UNDECLARED_COMM_NAME",
                                   where + ": communicated name '" + name +
                                       "' is neither a formal nor declared fresh"));
            }
        }
    }

    for (const auto& name : p.rhs.bare_nodes) {
        if (!known.count(name)) {
            out.push_back(make("UNDECLARED_RHS_NAME",
                               where + ": rhs node '" + name + "' is not declared"));
        }
    }
    for (const auto& e : p.rhs.edges) {
        if (e.tentacles.size() != e.label.arity) {
            out.push_back(make("RHS_ARITY_MISMATCH",
                               where + ": rhs edge '" + e.label.name + "' expects " +
                                   std::to_string(e.label.arity) + " tentacles, got " +
                                   std::to_string(e.tentacles.size())));
        }
        for (const auto& name : e.tentacles) {
            if (!known.count(name)) {
                out.push_back(make("UNDECLARED_RHS_NAME",
                                   where + ": rhs node '" + name + "' is not declared"));
            }
        }
    }

    return out;
}

NodeId FreshNodeAllocator::allocate() {
    return NodeId{next_++, "n#" + std::to_string(serial_++)};
}

InstantiatedRule instantiate(const Production& p, const Hypergraph& graph, EdgeId edge,
                             FreshNodeAllocator& alloc) {
    const Hyperedge* e = graph.find_edge(edge);
    if (e == nullptr) {
        throw Error(ErrorCode::InvalidArgument,
                    "no edge #" + std::to_string(edge.id) + " in the graph");
    }
    if (!(e->label == p.lhs_label)) {
        throw Error(ErrorCode::LabelMismatch,
                    "production '" + p.name + "' rewrites '" + p.lhs_label.name + "/" +
                        std::to_string(p.lhs_label.arity) + "', edge #" +
                        std::to_string(edge.id) + " is '" + e->label.name + "/" +
                        std::to_string(e->label.arity) + "'");
    }

    InstantiatedRule rule;
    rule.edge = edge;
    rule.production = &p;

    std::map<std::string, NodeId> env;
    for (std::size_t i = 0; i < p.lhs_formals.size(); ++i) {
        env.emplace(p.lhs_formals[i], e->tentacles[i]);
    }
    for (const auto& name : p.fresh_names) {
        NodeId fresh = alloc.allocate();
        env.emplace(name, fresh);
        rule.fresh.push_back(fresh);
    }

    auto lookup = [&](const std::string& name) -> NodeId {
        auto it = env.find(name);
        if (it == env.end()) {
            throw Error(ErrorCode::InvalidArgument,
                        "production '" + p.name + "' uses undeclared name '" + name + "'");
        }
        return it->second;
    };

    for (const auto& [index, cond] : p.conditions) {
        GroundCondition ground;
        ground.polarity = cond.polarity;
        ground.action = cond.action;
        for (const auto& name : cond.comm) ground.comm.push_back(lookup(name));
        rule.conditions.emplace(index, std::move(ground));
    }

    std::set<NodeId> mentioned;
    for (const auto& name : p.rhs.bare_nodes) mentioned.insert(lookup(name));
    for (const auto& se : p.rhs.edges) {
        GroundEdge ge;
        ge.label = se.label;
        for (const auto& name : se.tentacles) {
            NodeId n = lookup(name);
            ge.tentacles.push_back(n);
            mentioned.insert(n);
        }
        rule.rhs_edges.push_back(std::move(ge));
    }
    rule.rhs_nodes.assign(mentioned.begin(), mentioned.end());
    return rule;
}

Production idle_production(const Label& label) {
    Production p;
    p.name = "idle_" + label.name;
    p.lhs_label = label;
    SchemaEdge keep;
    keep.label = label;
    for (std::size_t i = 0; i < label.arity; ++i) {
        std::string formal = "x" + std::to_string(i);
        p.lhs_formals.push_back(formal);
        keep.tentacles.push_back(formal);
    }
    p.rhs.edges.push_back(std::move(keep));
    return p;
}

void ProductionRegistry::add(Production p, std::optional<EdgeId> pin) {
    productions_.push_back(std::move(p));
    pins_.push_back(pin);
}

std::vector<const Production*> ProductionRegistry::candidates(const Hyperedge& edge) const {
    std::vector<const Production*> out;
    for (std::size_t i = 0; i < productions_.size(); ++i) {
        const Production& p = productions_[i];
        if (!(p.lhs_label == edge.label)) continue;
        if (pins_[i] && !(*pins_[i] == edge.id)) continue;
        out.push_back(&p);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Production* a, const Production* b) { return a->name < b->name; });
    return out;
}

bool ProductionRegistry::has(const std::string& name) const {
    for (const auto& p : productions_) {
        if (p.name == name) return true;
    }
    return false;
}

std::vector<Diagnostic> ProductionRegistry::validate() const {
    std::vector<Diagnostic> out;
    std::set<std::string> names;
    std::map<std::string, std::size_t> label_arity;
    std::map<std::string, std::size_t> action_arity;

    auto check_label = [&](const Label& label, const std::string& where) {
        auto [it, inserted] = label_arity.emplace(label.name, label.arity);
        if (!inserted && it->second != label.arity) {
            out.push_back(make("LABEL_ARITY_CLASH",
                               where + ": label '" + label.name + "' used with arity " +
                                   std::to_string(label.arity) + " and " +
                                   std::to_string(it->second)));
        }
    };

    for (const auto& p : productions_) {
        auto local = shr::validate(p);
        out.insert(out.end(), local.begin(), local.end());

        const std::string where = "production '" + p.name + "'";
        if (!names.insert(p.name).second) {
            out.push_back(
                make("DUPLICATE_PRODUCTION", "production '" + p.name + "' defined twice"));
        }
        check_label(p.lhs_label, where);
        for (const auto& e : p.rhs.edges) check_label(e.label, where);
        for (const auto& [index, cond] : p.conditions) {
            if (cond.polarity == Polarity::Idle) continue;
            auto [it, inserted] =
                action_arity.emplace(cond.action.name, cond.action.comm_arity);
            if (!inserted && it->second != cond.action.comm_arity) {
                out.push_back(make("ACTION_ARITY_CLASH",
                                   where + ": action '" + cond.action.name +
                                       "' used with communication arity " +
                                       std::to_string(cond.action.comm_arity) + " and " +
                                       std::to_string(it->second)));
            }
        }
    }
    return out;
}

} // namespace shr
