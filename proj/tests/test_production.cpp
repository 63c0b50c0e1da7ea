#include "doctest.h"

#include "shr/gcm.hpp"
#include "shr/production.hpp"

#include <algorithm>
#include <set>

using namespace shr;

namespace {

bool has_code(const std::vector<Diagnostic>& diags, const std::string& code) {
    return std::any_of(diags.begin(), diags.end(),
                       [&](const Diagnostic& d) { return d.code == code; });
}

// f(g,l,s) with a store edge, the smallest context the component productions
// can be grounded against.
struct ComponentGraph {
    Hypergraph graph;
    NodeId g, l, s;
    EdgeId f, st;
};

ComponentGraph make_component() {
    ComponentGraph c;
    c.g = c.graph.add_node("g");
    c.l = c.graph.add_node("l");
    c.s = c.graph.add_node("s");
    c.f = c.graph.add_edge(gcm::component_label, {c.g, c.l, c.s});
    c.st = c.graph.add_edge(gcm::store_label, {c.s});
    return c;
}

} // namespace

TEST_CASE("the migration production is well-formed") {
    CHECK(validate(gcm::go()).empty());
}

TEST_CASE("a comm vector may only name formals and declared fresh nodes") {
    Production p = gcm::go();
    p.conditions[0].comm[1] = "mystery";
    auto diags = validate(p);
    CHECK(has_code(diags, "UNDECLARED_COMM_NAME"));
}

TEST_CASE("one action name binds to one communication arity") {
    ProductionRegistry registry;
    Production two = gcm::go();
    registry.add(two);

    Production three;
    three.name = "go_wide";
    three.lhs_label = gcm::component_label;
    three.lhs_formals = {"g", "l", "s"};
    three.fresh_names = {"a", "b", "c"};
    three.conditions[0] = Condition{Polarity::Input, ActionSig{"go", 3}, {"a", "b", "c"}};
    three.rhs.edges.push_back(SchemaEdge{gcm::component_label, {"a", "b", "c"}});
    three.rhs.bare_nodes = {"g", "l", "s"};
    CHECK(validate(three).empty()); // fine in isolation
    registry.add(three);

    CHECK(has_code(registry.validate(), "ACTION_ARITY_CLASH"));
}

TEST_CASE("validation reports scoping and arity defects without stopping") {
    Production p;
    p.name = "broken";
    p.lhs_label = Label{"f", 3};
    p.lhs_formals = {"g", "g"};       // wrong count and a duplicate
    p.fresh_names = {"g"};            // shadows a formal
    p.conditions[7] = Condition{Polarity::Input, ActionSig{"x", 1}, {"g", "g"}};
    p.rhs.edges.push_back(SchemaEdge{Label{"f", 3}, {"g", "nowhere"}});
    auto diags = validate(p);
    CHECK(has_code(diags, "LHS_FORMALS_ARITY"));
    CHECK(has_code(diags, "DUPLICATE_FORMAL"));
    CHECK(has_code(diags, "FRESH_SHADOWS_FORMAL"));
    CHECK(has_code(diags, "CONDITION_INDEX_RANGE"));
    CHECK(has_code(diags, "COMM_ARITY_MISMATCH"));
    CHECK(has_code(diags, "UNDECLARED_RHS_NAME"));
    CHECK(has_code(diags, "RHS_ARITY_MISMATCH"));
}

TEST_CASE("grounding resolves formals to the edge's nodes and fresh names to new ids") {
    ComponentGraph c = make_component();
    FreshNodeAllocator alloc(c.graph.next_node_id());
    InstantiatedRule rule = instantiate(gcm::go(), c.graph, c.f, alloc);

    REQUIRE(rule.conditions.count(0) == 1);
    const GroundCondition& cond = rule.conditions.at(0);
    CHECK(cond.polarity == Polarity::Input);
    CHECK(cond.action == gcm::go_action);
    REQUIRE(cond.comm.size() == 2);
    // Both communicated nodes are fresh: ids above everything in the graph.
    CHECK(cond.comm[0].id >= c.graph.next_node_id());
    CHECK(cond.comm[1].id >= c.graph.next_node_id());

    REQUIRE(rule.rhs_edges.size() == 1);
    CHECK(rule.rhs_edges[0].label == gcm::component_label);
    CHECK(rule.rhs_edges[0].tentacles ==
          std::vector<NodeId>{cond.comm[0], cond.comm[1], c.s});
}

TEST_CASE("grounding rejects a label mismatch") {
    ComponentGraph c = make_component();
    FreshNodeAllocator alloc(c.graph.next_node_id());
    try {
        instantiate(gcm::go(), c.graph, c.st, alloc);
        FAIL("expected LabelMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LabelMismatch);
    }
}

TEST_CASE("two groundings never share fresh nodes") {
    ComponentGraph c = make_component();
    NodeId g2 = c.graph.add_node("g2");
    NodeId l2 = c.graph.add_node("l2");
    NodeId s2 = c.graph.add_node("s2");
    EdgeId f2 = c.graph.add_edge(gcm::component_label, {g2, l2, s2});

    FreshNodeAllocator alloc(c.graph.next_node_id());
    InstantiatedRule a = instantiate(gcm::start(), c.graph, c.f, alloc);
    InstantiatedRule b = instantiate(gcm::start(), c.graph, f2, alloc);

    std::set<std::uint32_t> ids_a, ids_b;
    for (const auto& n : a.fresh) ids_a.insert(n.id);
    for (const auto& n : b.fresh) ids_b.insert(n.id);
    CHECK(ids_a.size() == 3);
    CHECK(ids_b.size() == 3);
    for (auto id : ids_a) CHECK(ids_b.count(id) == 0);
}

TEST_CASE("comm vectors keep their action's arity after grounding") {
    ComponentGraph c = make_component();
    for (const Production& p : gcm::all_productions()) {
        if (!(p.lhs_label == gcm::component_label)) continue;
        FreshNodeAllocator alloc(c.graph.next_node_id());
        InstantiatedRule rule = instantiate(p, c.graph, c.f, alloc);
        for (const auto& [index, cond] : rule.conditions) {
            CHECK(cond.comm.size() == cond.action.comm_arity);
        }
    }
}

TEST_CASE("grounded right-hand sides reference only lhs nodes and fresh allocations") {
    ComponentGraph c = make_component();
    for (const Production& p : gcm::all_productions()) {
        if (!(p.lhs_label == gcm::component_label)) continue;
        FreshNodeAllocator alloc(c.graph.next_node_id());
        InstantiatedRule rule = instantiate(p, c.graph, c.f, alloc);
        std::set<std::uint32_t> allowed{c.g.id, c.l.id, c.s.id};
        for (const auto& n : rule.fresh) allowed.insert(n.id);
        for (const auto& n : rule.rhs_nodes) CHECK(allowed.count(n.id) == 1);
        for (const auto& e : rule.rhs_edges) {
            for (const auto& t : e.tentacles) CHECK(allowed.count(t.id) == 1);
        }
    }
}

TEST_CASE("the idle production re-creates its edge and asks nothing") {
    Production idle = idle_production(gcm::store_label);
    CHECK(idle.name == "idle_sigma");
    CHECK(idle.conditions.empty());
    REQUIRE(idle.rhs.edges.size() == 1);
    CHECK(idle.rhs.edges[0].label == gcm::store_label);
    CHECK(idle.rhs.edges[0].tentacles == idle.lhs_formals);

    ComponentGraph c = make_component();
    FreshNodeAllocator alloc(c.graph.next_node_id());
    InstantiatedRule rule = instantiate(idle, c.graph, c.st, alloc);
    CHECK(rule.conditions.empty());
    CHECK(rule.fresh.empty());
    REQUIRE(rule.rhs_edges.size() == 1);
    CHECK(rule.rhs_edges[0].tentacles == std::vector<NodeId>{c.s});
}

TEST_CASE("idle productions validate cleanly for every label in use") {
    for (const Label& label : {gcm::component_label, gcm::manager_label, gcm::store_label,
                               Label{"wide", 7}, Label{"nullary", 0}}) {
        CHECK(validate(idle_production(label)).empty());
    }
}

TEST_CASE("validation is total on garbage input") {
    Production p;
    p.name = "";
    p.lhs_label = Label{"", 0};
    p.conditions[0] = Condition{};
    auto diags = validate(p);
    CHECK(!diags.empty()); // a defect report, not a crash
}

TEST_CASE("the fresh allocator never repeats an id") {
    FreshNodeAllocator alloc(10);
    std::set<std::uint32_t> seen;
    for (int i = 0; i < 100; ++i) {
        NodeId n = alloc.allocate();
        CHECK(n.id >= 10);
        CHECK(seen.insert(n.id).second);
    }
    CHECK(alloc.allocate().display_name == "n#100");
}

TEST_CASE("registry candidates are filtered by label and sorted by name") {
    ProductionRegistry registry;
    for (const Production& p : gcm::all_productions()) registry.add(p);

    ComponentGraph c = make_component();
    auto for_f = registry.candidates(*c.graph.find_edge(c.f));
    REQUIRE(for_f.size() == 6);
    std::vector<std::string> names;
    for (const auto* p : for_f) names.push_back(p->name);
    CHECK(std::is_sorted(names.begin(), names.end()));
    CHECK(names == std::vector<std::string>{"copy", "go", "kill", "rep_fresh", "rep_share",
                                            "start"});

    auto for_sigma = registry.candidates(*c.graph.find_edge(c.st));
    REQUIRE(for_sigma.size() == 1);
    CHECK(for_sigma[0]->name == "store_rep");
}

TEST_CASE("a pinned production is offered only at its edge") {
    ComponentGraph c = make_component();
    NodeId g2 = c.graph.add_node("g2");
    NodeId l2 = c.graph.add_node("l2");
    NodeId s2 = c.graph.add_node("s2");
    EdgeId f2 = c.graph.add_edge(gcm::component_label, {g2, l2, s2});

    ProductionRegistry registry;
    registry.add(gcm::go(), c.f);
    CHECK(registry.candidates(*c.graph.find_edge(c.f)).size() == 1);
    CHECK(registry.candidates(*c.graph.find_edge(f2)).empty());
}

TEST_CASE("registry validation catches duplicates and label clashes") {
    ProductionRegistry registry;
    registry.add(gcm::go());
    registry.add(gcm::go());
    CHECK(has_code(registry.validate(), "DUPLICATE_PRODUCTION"));

    ProductionRegistry clashing;
    clashing.add(gcm::go());
    Production p = idle_production(Label{"f", 2}); // f is arity 3 elsewhere
    p.name = "narrow_f";
    clashing.add(p);
    CHECK(has_code(clashing.validate(), "LABEL_ARITY_CLASH"));
}
