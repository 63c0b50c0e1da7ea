#include "shr/hypergraph.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace shr {

namespace {

std::string quote_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

} // namespace

NodeId Hypergraph::add_node(std::string display_name) {
    NodeId node{next_node_++, std::move(display_name)};
    nodes_.push_back(node);
    return node;
}

EdgeId Hypergraph::add_edge(const Label& label, std::vector<NodeId> tentacles) {
    if (tentacles.size() != label.arity) {
        throw Error(ErrorCode::ArityMismatch,
                    "edge '" + label.name + "' expects " + std::to_string(label.arity) +
                        " tentacles, got " + std::to_string(tentacles.size()));
    }
    for (const auto& e : edges_) {
        if (e.label.name == label.name && e.label.arity != label.arity) {
            throw Error(ErrorCode::ArityMismatch,
                        "label '" + label.name + "' already used with arity " +
                            std::to_string(e.label.arity));
        }
    }
    for (const auto& t : tentacles) {
        if (!has_node(t)) {
            throw Error(ErrorCode::UnknownNode,
                        "edge '" + label.name + "' attaches to unknown node #" +
                            std::to_string(t.id));
        }
    }
    EdgeId id{next_edge_++};
    edges_.push_back(Hyperedge{id, label, std::move(tentacles)});
    return id;
}

void Hypergraph::insert_node(const NodeId& node) {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), node);
    if (it != nodes_.end() && it->id == node.id) return;
    nodes_.insert(it, node);
    if (node.id >= next_node_) next_node_ = node.id + 1;
}

void Hypergraph::insert_edge(const Hyperedge& edge) {
    if (edge.tentacles.size() != edge.label.arity) {
        throw Error(ErrorCode::ArityMismatch,
                    "edge '" + edge.label.name + "' expects " +
                        std::to_string(edge.label.arity) + " tentacles, got " +
                        std::to_string(edge.tentacles.size()));
    }
    for (const auto& t : edge.tentacles) {
        if (!has_node(t)) {
            throw Error(ErrorCode::UnknownNode,
                        "edge '" + edge.label.name + "' attaches to unknown node #" +
                            std::to_string(t.id));
        }
    }
    auto it = std::lower_bound(edges_.begin(), edges_.end(), edge,
                               [](const Hyperedge& a, const Hyperedge& b) { return a.id < b.id; });
    if (it != edges_.end() && it->id == edge.id) {
        throw Error(ErrorCode::InvalidArgument,
                    "duplicate edge id #" + std::to_string(edge.id.id));
    }
    edges_.insert(it, edge);
    if (edge.id.id >= next_edge_) next_edge_ = edge.id.id + 1;
}

bool Hypergraph::has_node(const NodeId& node) const { return find_node(node.id) != nullptr; }

bool Hypergraph::has_edge(EdgeId id) const { return find_edge(id) != nullptr; }

const Hyperedge* Hypergraph::find_edge(EdgeId id) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                               [](const Hyperedge& e, EdgeId want) { return e.id < want; });
    if (it == edges_.end() || !(it->id == id)) return nullptr;
    return &*it;
}

const NodeId* Hypergraph::find_node(std::uint32_t id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), NodeId{id, {}});
    if (it == nodes_.end() || it->id != id) return nullptr;
    return &*it;
}

std::vector<std::pair<EdgeId, std::size_t>> Hypergraph::attached(const NodeId& node) const {
    if (!has_node(node)) {
        throw Error(ErrorCode::UnknownNode,
                    "node #" + std::to_string(node.id) + " is not in the graph");
    }
    std::vector<std::pair<EdgeId, std::size_t>> out;
    for (const auto& e : edges_) {
        for (std::size_t i = 0; i < e.tentacles.size(); ++i) {
            if (e.tentacles[i].id == node.id) out.emplace_back(e.id, i);
        }
    }
    return out;
}

Hypergraph Hypergraph::apply_substitution(const NodeSubstitution& subst) const {
    // Resolves a node through the substitution closure; a cycle collapses
    // onto its smallest-id member.
    auto resolve = [&subst](NodeId n) -> NodeId {
        std::vector<NodeId> path;
        std::set<std::uint32_t> seen;
        NodeId cur = n;
        while (true) {
            auto it = subst.find(cur);
            if (it == subst.end()) return cur;
            if (!seen.insert(cur.id).second) {
                NodeId best = cur;
                bool in_cycle = false;
                for (const auto& p : path) {
                    if (p.id == cur.id) in_cycle = true;
                    if (in_cycle && p.id < best.id) best = p;
                }
                return best;
            }
            path.push_back(cur);
            cur = it->second;
        }
    };

    Hypergraph out;
    for (const auto& n : nodes_) out.insert_node(resolve(n));
    for (const auto& e : edges_) {
        Hyperedge ne = e;
        for (auto& t : ne.tentacles) {
            t = resolve(t);
            out.insert_node(t);
        }
        out.insert_edge(ne);
    }
    return out;
}

bool operator==(const Hypergraph& a, const Hypergraph& b) {
    if (a.nodes_.size() != b.nodes_.size() || a.edges_.size() != b.edges_.size()) return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
        if (a.nodes_[i].id != b.nodes_[i].id ||
            a.nodes_[i].display_name != b.nodes_[i].display_name) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.edges_.size(); ++i) {
        if (!(a.edges_[i] == b.edges_[i])) return false;
    }
    return true;
}

namespace {

// Sorted multiset of (label, tentacle position) incidences; nodes can only
// map to nodes with the same signature.
using NodeSig = std::vector<std::pair<std::string, std::size_t>>;

std::map<std::uint32_t, NodeSig> node_signatures(const Hypergraph& g) {
    std::map<std::uint32_t, NodeSig> sigs;
    for (const auto& n : g.nodes()) sigs[n.id];
    for (const auto& e : g.edges()) {
        for (std::size_t i = 0; i < e.tentacles.size(); ++i) {
            sigs[e.tentacles[i].id].emplace_back(e.label.name, i);
        }
    }
    for (auto& [id, sig] : sigs) std::sort(sig.begin(), sig.end());
    return sigs;
}

} // namespace

bool is_isomorphic(const Hypergraph& a, const Hypergraph& b) {
    if (a.nodes().size() != b.nodes().size()) return false;
    if (a.edges().size() != b.edges().size()) return false;

    auto label_counts = [](const Hypergraph& g) {
        std::map<std::pair<std::string, std::size_t>, std::size_t> counts;
        for (const auto& e : g.edges()) ++counts[{e.label.name, e.label.arity}];
        return counts;
    };
    if (label_counts(a) != label_counts(b)) return false;

    auto sig_a = node_signatures(a);
    auto sig_b = node_signatures(b);
    {
        std::vector<NodeSig> va, vb;
        va.reserve(sig_a.size());
        vb.reserve(sig_b.size());
        for (const auto& [id, s] : sig_a) va.push_back(s);
        for (const auto& [id, s] : sig_b) vb.push_back(s);
        std::sort(va.begin(), va.end());
        std::sort(vb.begin(), vb.end());
        if (va != vb) return false;
    }

    const auto& ea = a.edges();
    const auto& eb = b.edges();
    std::vector<bool> used(eb.size(), false);
    std::map<std::uint32_t, std::uint32_t> fwd, rev;

    std::function<bool(std::size_t)> match = [&](std::size_t k) -> bool {
        if (k == ea.size()) return true;
        const Hyperedge& e1 = ea[k];
        for (std::size_t j = 0; j < eb.size(); ++j) {
            if (used[j]) continue;
            const Hyperedge& e2 = eb[j];
            if (!(e1.label == e2.label)) continue;
            std::vector<std::pair<std::uint32_t, std::uint32_t>> bound;
            bool fits = true;
            for (std::size_t t = 0; t < e1.tentacles.size() && fits; ++t) {
                std::uint32_t na = e1.tentacles[t].id;
                std::uint32_t nb = e2.tentacles[t].id;
                auto itf = fwd.find(na);
                auto itr = rev.find(nb);
                if (itf != fwd.end()) {
                    fits = itf->second == nb;
                } else if (itr != rev.end()) {
                    fits = false;
                } else if (sig_a.at(na) != sig_b.at(nb)) {
                    fits = false;
                } else {
                    fwd.emplace(na, nb);
                    rev.emplace(nb, na);
                    bound.emplace_back(na, nb);
                }
            }
            if (fits) {
                used[j] = true;
                if (match(k + 1)) return true;
                used[j] = false;
            }
            for (const auto& [na, nb] : bound) {
                fwd.erase(na);
                rev.erase(nb);
            }
        }
        return false;
    };
    // Edges carry all structure; leftover nodes are isolated on both sides
    // and equal in number, so any pairing of them completes the bijection.
    return match(0);
}

std::string to_dot(const Hypergraph& graph) {
    std::ostringstream out;
    out << "graph shr {\n";
    out << "  node [fontsize=10];\n";
    for (const auto& n : graph.nodes()) {
        out << "  n" << n.id << " [shape=point, xlabel=\"" << quote_escape(n.display_name)
            << "\"];\n";
    }
    for (const auto& e : graph.edges()) {
        out << "  e" << e.id.id << " [shape=box, label=\"" << quote_escape(e.label.name)
            << "\"];\n";
        for (std::size_t i = 0; i < e.tentacles.size(); ++i) {
            out << "  e" << e.id.id << " -- n" << e.tentacles[i].id << " [label=\"" << i
                << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

namespace {

bool is_dsl_keyword(const std::string& s) {
    static const std::set<std::string> keywords = {
        "labels", "graph",  "node",   "edge",  "production", "for",   "new",
        "on",     "rhs",    "rule",   "when",  "if",         "then",  "target",
        "scenario", "inject", "apply", "assert", "isomorphic", "count", "exists",
        "and",    "or",     "not",
    };
    return keywords.count(s) > 0;
}

std::string sanitize_identifier(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            out.push_back(c);
        } else {
            out.push_back('_');
        }
    }
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) {
        out.insert(out.begin(), 'n');
    }
    if (is_dsl_keyword(out)) out.push_back('_');
    return out;
}

} // namespace

std::vector<std::string> canonical_node_names(const Hypergraph& graph) {
    std::set<std::string> taken;
    std::vector<std::string> names;
    names.reserve(graph.nodes().size());
    for (const auto& n : graph.nodes()) {
        std::string base = sanitize_identifier(n.display_name);
        std::string name = base;
        std::size_t suffix = 2;
        while (taken.count(name)) name = base + "_" + std::to_string(suffix++);
        taken.insert(name);
        names.push_back(name);
    }
    return names;
}

std::string canonical_text(const Hypergraph& graph,
                           const std::map<EdgeId, std::string>* edge_names) {
    std::vector<std::string> names = canonical_node_names(graph);
    std::map<std::uint32_t, std::string> by_id;
    for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
        by_id.emplace(graph.nodes()[i].id, names[i]);
    }

    std::ostringstream out;
    out << "graph {\n";
    if (!names.empty()) {
        out << "  node ";
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) out << ", ";
            out << names[i];
        }
        out << ";\n";
    }
    for (const auto& e : graph.edges()) {
        out << "  edge ";
        if (edge_names) {
            auto it = edge_names->find(e.id);
            if (it != edge_names->end() && !it->second.empty()) out << it->second << ": ";
        }
        out << e.label.name << "(";
        for (std::size_t i = 0; i < e.tentacles.size(); ++i) {
            if (i) out << ", ";
            out << by_id.at(e.tentacles[i].id);
        }
        out << ");\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace shr
