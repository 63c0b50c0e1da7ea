#include <algorithm>
#include <set>
#include <sstream>

#include "shr/dsl.hpp"

namespace shr {

namespace {

int guard_prec(const Guard& g) {
    switch (g.kind) {
    case Guard::Kind::Or: return 1;
    case Guard::Kind::And: return 2;
    case Guard::Kind::Not: return 3;
    default: return 4;
    }
}

std::string guard_text(const Guard& g);

std::string guard_child(const Guard& parent, const Guard& child, bool right) {
    const int pp = guard_prec(parent);
    const int cp = guard_prec(child);
    const bool binary = child.kind == Guard::Kind::And || child.kind == Guard::Kind::Or;
    const bool parens = cp < pp || (cp == pp && right && binary);
    std::string text = guard_text(child);
    return parens ? "(" + text + ")" : text;
}

std::string guard_text(const Guard& g) {
    switch (g.kind) {
    case Guard::Kind::Count:
        return "count(" + g.label + ") " + to_string(g.cmp) + " " + std::to_string(g.value);
    case Guard::Kind::Exists:
        return "exists(" + g.label + ", " + std::to_string(g.tentacle) + ", " + g.display +
               ")";
    case Guard::Kind::And:
        return guard_child(g, *g.lhs, false) + " and " + guard_child(g, *g.rhs, true);
    case Guard::Kind::Or:
        return guard_child(g, *g.lhs, false) + " or " + guard_child(g, *g.rhs, true);
    case Guard::Kind::Not: return "not " + guard_child(g, *g.lhs, true);
    }
    return "";
}

void emit_name_list(std::ostringstream& out, const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out << ", ";
        out << names[i];
    }
}

void emit_production(std::ostringstream& out, const Production& p) {
    out << "production " << p.name << " for " << p.lhs_label.name << "(";
    emit_name_list(out, p.lhs_formals);
    out << ") {\n";
    if (!p.fresh_names.empty()) {
        out << "  new ";
        emit_name_list(out, p.fresh_names);
        out << ";\n";
    }
    for (const auto& [index, cond] : p.conditions) {
        out << "  on " << index << ": " << cond.action.name;
        if (cond.polarity == Polarity::Output) out << "!";
        out << "(";
        emit_name_list(out, cond.comm);
        out << ");\n";
    }
    out << "  rhs {\n";
    if (!p.rhs.bare_nodes.empty()) {
        out << "    node ";
        emit_name_list(out, p.rhs.bare_nodes);
        out << ";\n";
    }
    for (const auto& e : p.rhs.edges) {
        out << "    edge " << e.label.name << "(";
        emit_name_list(out, e.tentacles);
        out << ");\n";
    }
    out << "  }\n";
    out << "}\n";
}

void emit_op_call(std::ostringstream& out, const PolicyRule& rule) {
    out << to_string(rule.op) << "(target " << rule.target;
    if (!rule.args.empty()) {
        out << "; ";
        for (std::size_t i = 0; i < rule.args.size(); ++i) {
            if (i) out << ", ";
            if (rule.args[i].kind == OpArg::Kind::Fresh) {
                out << "new";
            } else {
                out << "t" << rule.args[i].tentacle;
            }
        }
    }
    out << ")";
}

// Re-emits a graph block shifted right by `indent` spaces.
void emit_indented_graph(std::ostringstream& out, const std::string& graph_text,
                         const std::string& head, const std::string& tail) {
    std::istringstream lines(graph_text);
    std::string line;
    bool first = true;
    while (std::getline(lines, line)) {
        if (first) {
            out << head << "\n"; // replaces "graph {"
            first = false;
        } else if (line == "}") {
            out << tail << "\n";
        } else {
            out << "  " << line << "\n";
        }
    }
}

} // namespace

std::string serialize(const SpecFile& spec) {
    std::ostringstream out;
    bool separate = false;
    auto section_break = [&] {
        if (separate) out << "\n";
        separate = true;
    };

    if (!spec.labels.empty()) {
        section_break();
        std::vector<Label> labels = spec.labels;
        std::sort(labels.begin(), labels.end(), [](const Label& a, const Label& b) {
            return a.name < b.name;
        });
        out << "labels {\n";
        for (const auto& l : labels) out << "  " << l.name << "/" << l.arity << ";\n";
        out << "}\n";
    }

    if (!spec.graph.nodes().empty() || !spec.graph.edges().empty()) {
        section_break();
        out << canonical_text(spec.graph, &spec.edge_names);
    }

    std::vector<const Production*> productions;
    productions.reserve(spec.productions.size());
    for (const auto& p : spec.productions) productions.push_back(&p);
    std::stable_sort(productions.begin(), productions.end(),
                     [](const Production* a, const Production* b) { return a->name < b->name; });
    for (const Production* p : productions) {
        section_break();
        emit_production(out, *p);
    }

    for (const auto& rule : spec.rules) {
        section_break();
        out << "rule {\n";
        out << "  when " << rule.event;
        if (rule.guard) out << " if " << guard_text(*rule.guard);
        out << " then ";
        emit_op_call(out, rule);
        out << ";\n";
        out << "}\n";
    }

    if (spec.scenario) {
        section_break();
        out << "scenario {\n";
        for (const auto& step : spec.scenario->steps) {
            if (const auto* inject = std::get_if<Inject>(&step)) {
                out << "  inject " << inject->event << ";\n";
            } else if (const auto* apply = std::get_if<ApplyStep>(&step)) {
                out << "  apply " << apply->index << ";\n";
            } else if (const auto* count = std::get_if<AssertCount>(&step)) {
                out << "  assert count(" << count->label << ") " << to_string(count->cmp)
                    << " " << count->value << ";\n";
            } else if (const auto* iso = std::get_if<AssertIso>(&step)) {
                emit_indented_graph(out, canonical_text(iso->expected),
                                    "  assert isomorphic graph {", "  };");
            }
        }
        out << "}\n";
    }

    return out.str();
}

bool operator==(const SpecFile& a, const SpecFile& b) {
    auto sorted_labels = [](std::vector<Label> v) {
        std::sort(v.begin(), v.end(), [](const Label& x, const Label& y) {
            return x.name < y.name || (x.name == y.name && x.arity < y.arity);
        });
        return v;
    };
    if (sorted_labels(a.labels) != sorted_labels(b.labels)) return false;
    if (!(a.graph == b.graph)) return false;
    if (a.edge_names != b.edge_names) return false;

    auto sorted_productions = [](std::vector<Production> v) {
        std::stable_sort(v.begin(), v.end(), [](const Production& x, const Production& y) {
            return x.name < y.name;
        });
        return v;
    };
    if (sorted_productions(a.productions) != sorted_productions(b.productions)) return false;
    if (!(a.rules == b.rules)) return false;
    if (a.scenario.has_value() != b.scenario.has_value()) return false;
    if (a.scenario && !(*a.scenario == *b.scenario)) return false;
    return true;
}

ProductionRegistry build_registry(const SpecFile& spec) {
    ProductionRegistry registry;
    for (const auto& p : spec.productions) registry.add(p);
    std::set<GcmOp> ops;
    for (const auto& rule : spec.rules) ops.insert(rule.op);
    for (GcmOp op : ops) {
        for (const Production& p : op_receivers(op)) {
            if (!registry.has(p.name)) registry.add(p);
        }
    }
    return registry;
}

namespace {

std::string edge_ref(EdgeId id, const std::map<EdgeId, std::string>& names) {
    std::string out = "e" + std::to_string(id.id);
    auto it = names.find(id);
    if (it != names.end() && !it->second.empty()) out += " (" + it->second + ")";
    return out;
}

} // namespace

std::string describe_transition(const Transition& t,
                                const std::map<EdgeId, std::string>& edge_names) {
    std::ostringstream out;
    out << "assignment:\n";
    for (const auto& [edge, name] : t.assignment) {
        out << "  " << edge_ref(edge, edge_names) << " -> " << (name.empty() ? "idle" : name)
            << "\n";
    }
    if (!t.fired.empty()) {
        out << "fired:\n";
        for (const auto& sync : t.fired) {
            out << "  " << sync.action.name << " at node '" << sync.node.display_name
                << "' (output " << edge_ref(sync.output_edge, edge_names);
            if (sync.input_edges.empty()) {
                out << ", no inputs";
            } else {
                out << ", inputs ";
                for (std::size_t i = 0; i < sync.input_edges.size(); ++i) {
                    if (i) out << ", ";
                    out << edge_ref(sync.input_edges[i], edge_names);
                }
            }
            out << ")\n";
        }
    }
    if (!t.fusion.empty()) {
        out << "fusion:\n";
        for (const auto& [from, to] : t.fusion) {
            out << "  '" << from.display_name << "' (#" << from.id << ") -> '"
                << to.display_name << "' (#" << to.id << ")\n";
        }
    }
    out << "result digest: " << graph_digest(t.result) << "\n";
    return out.str();
}

} // namespace shr
