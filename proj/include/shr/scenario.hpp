#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shr/dsl.hpp"
#include "shr/engine.hpp"

namespace shr {

/// Result of executing a spec's scenario (or, without one, of running the
/// engine to quiescence under the step budget).
struct ScenarioOutcome {
    Trace trace;
    std::string initial_dot;
    std::vector<std::string> step_dots; // one per trace step
    bool passed = true;
    std::string failure;      // first failed assertion / bad apply, if any
    Hypergraph final_graph;
    bool budget_exhausted = false;
};

/// Runs the scenario steps in order. `inject` arms the matching policy
/// rules against the current graph; `apply k` picks the k-th enumerated
/// transition (among armed ones after an inject, among all otherwise);
/// assertions check the current graph. Specs without a scenario rewrite
/// until quiescence or until `max_steps` transitions were taken.
ScenarioOutcome run_scenario(const SpecFile& spec, SyncPolicy policy, std::size_t max_steps);

} // namespace shr
