#include "shr/gcm.hpp"

#include "shr/error.hpp"

namespace shr {
namespace gcm {

namespace {

Production component_base(const char* name) {
    Production p;
    p.name = name;
    p.lhs_label = component_label;
    p.lhs_formals = {"g", "l", "s"};
    return p;
}

Condition input(const ActionSig& action, std::vector<std::string> comm) {
    Condition c;
    c.polarity = Polarity::Input;
    c.action = action;
    c.comm = std::move(comm);
    return c;
}

Condition output(const ActionSig& action, std::vector<std::string> comm) {
    Condition c;
    c.polarity = Polarity::Output;
    c.action = action;
    c.comm = std::move(comm);
    return c;
}

SchemaEdge edge(const Label& label, std::vector<std::string> tentacles) {
    return SchemaEdge{label, std::move(tentacles)};
}

} // namespace

Production go() {
    Production p = component_base("go");
    p.fresh_names = {"g2", "l2"};
    p.conditions.emplace(0, input(go_action, {"g2", "l2"}));
    p.rhs.bare_nodes = {"g", "l"};
    p.rhs.edges = {edge(component_label, {"g2", "l2", "s"})};
    return p;
}

Production start() {
    Production p = component_base("start");
    p.fresh_names = {"g2", "l2", "s2"};
    p.conditions.emplace(0, input(start_action, {"g2", "l2", "s2"}));
    p.rhs.bare_nodes = {"g", "l", "s"};
    p.rhs.edges = {edge(component_label, {"g2", "l2", "s2"}), edge(store_label, {"s2"})};
    return p;
}

Production rep_share() {
    Production p = component_base("rep_share");
    p.fresh_names = {"g2", "l2"};
    p.conditions.emplace(0, input(rep_action, {"g2", "l2"}));
    p.rhs.edges = {edge(component_label, {"g", "l", "s"}),
                   edge(component_label, {"g2", "l2", "s"})};
    return p;
}

Production rep_fresh() {
    Production p = component_base("rep_fresh");
    p.fresh_names = {"g2", "l2", "s2"};
    p.conditions.emplace(0, input(rep_sigma_action, {"g2", "l2"}));
    p.rhs.edges = {edge(component_label, {"g", "l", "s"}),
                   edge(component_label, {"g2", "l2", "s2"}), edge(store_label, {"s2"})};
    return p;
}

Production copy() {
    Production p = component_base("copy");
    p.fresh_names = {"g2", "l2", "s2"};
    p.conditions.emplace(0, input(copy_action, {"g2", "s2", "l2"}));
    p.conditions.emplace(2, output(rep_store_action, {"s2"}));
    p.rhs.edges = {edge(component_label, {"g", "l", "s"}),
                   edge(component_label, {"g2", "l2", "s2"})};
    return p;
}

Production store_rep() {
    Production p;
    p.name = "store_rep";
    p.lhs_label = store_label;
    p.lhs_formals = {"s"};
    p.fresh_names = {"s2"};
    p.conditions.emplace(0, input(rep_store_action, {"s2"}));
    p.rhs.edges = {edge(store_label, {"s"}), edge(store_label, {"s2"})};
    return p;
}

Production kill() {
    Production p = component_base("kill");
    p.conditions.emplace(0, input(kill_action, {}));
    p.rhs.bare_nodes = {"g", "l", "s"};
    return p;
}

std::vector<Production> all_productions() {
    return {go(), start(), rep_share(), rep_fresh(), copy(), store_rep(), kill()};
}

Production am_emitter(const ActionSig& action, const std::vector<CommSlot>& slots) {
    if (slots.size() != action.comm_arity) {
        throw Error(ErrorCode::ArityMismatch,
                    "action '" + action.name + "' communicates " +
                        std::to_string(action.comm_arity) + " nodes, got " +
                        std::to_string(slots.size()) + " slots");
    }

    Production p;
    p.name = "am_emit_" + action.name;
    p.lhs_label = manager_label;
    p.lhs_formals = {"x0", "x1"};

    std::vector<std::string> comm;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const CommSlot& slot = slots[i];
        if (slot.kind == CommSlot::Kind::Existing) {
            if (slot.tentacle >= manager_label.arity) {
                throw Error(ErrorCode::InvalidArgument,
                            "manager edges have no tentacle " + std::to_string(slot.tentacle));
            }
            std::string formal = "x" + std::to_string(slot.tentacle);
            comm.push_back(formal);
            p.name += "_t" + std::to_string(slot.tentacle);
        } else {
            std::string fresh = "a" + std::to_string(i);
            p.fresh_names.push_back(fresh);
            comm.push_back(fresh);
            p.name += "_new";
        }
    }

    Condition emit;
    emit.polarity = Polarity::Output;
    emit.action = action;
    emit.comm = std::move(comm);
    p.conditions.emplace(0, std::move(emit));

    p.rhs.edges = {SchemaEdge{manager_label, {"x0", "x1"}}};
    return p;
}

} // namespace gcm
} // namespace shr
