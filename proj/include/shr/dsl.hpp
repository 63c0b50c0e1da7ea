#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shr/diagnostics.hpp"
#include "shr/engine.hpp"
#include "shr/hypergraph.hpp"
#include "shr/manager.hpp"
#include "shr/production.hpp"

namespace shr {

/// Scenario steps, in file order.
struct Inject {
    std::string event;

    friend bool operator==(const Inject&, const Inject&) = default;
};

struct ApplyStep {
    std::size_t index = 0;

    friend bool operator==(const ApplyStep&, const ApplyStep&) = default;
};

struct AssertCount {
    std::string label;
    Cmp cmp = Cmp::Eq;
    std::size_t value = 0;

    friend bool operator==(const AssertCount&, const AssertCount&) = default;
};

struct AssertIso {
    Hypergraph expected;

    friend bool operator==(const AssertIso&, const AssertIso&) = default;
};

using ScenarioStep = std::variant<Inject, ApplyStep, AssertCount, AssertIso>;

struct Scenario {
    std::vector<ScenarioStep> steps;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// A parsed specification file.
struct SpecFile {
    std::vector<Label> labels;
    Hypergraph graph;
    std::map<EdgeId, std::string> edge_names;
    std::vector<Production> productions;
    std::vector<PolicyRule> rules;
    std::optional<Scenario> scenario;

    /// Structural equality up to section ordering: labels and productions
    /// compare as name-sorted sets, everything else in order.
    friend bool operator==(const SpecFile& a, const SpecFile& b);
};

struct ParseResult {
    SpecFile spec;
    std::vector<Diagnostic> diagnostics;

    bool ok() const;
};

ParseResult parse(const std::string& text);

/// Canonical textual form; parse(serialize(s)).spec == s for valid specs.
std::string serialize(const SpecFile& spec);

/// Builds the engine registry for a spec: the file's own productions, plus
/// the component-model receivers for every operation its rules mention
/// (file productions of the same name take precedence).
ProductionRegistry build_registry(const SpecFile& spec);

/// Human-readable multi-line description of a transition, using declared
/// edge names where available.
std::string describe_transition(const Transition& t,
                                const std::map<EdgeId, std::string>& edge_names);

} // namespace shr
