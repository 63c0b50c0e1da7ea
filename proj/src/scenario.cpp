#include "shr/scenario.hpp"

#include "shr/manager.hpp"

namespace shr {

namespace {

std::size_t count_label(const Hypergraph& graph, const std::string& label) {
    std::size_t n = 0;
    for (const auto& e : graph.edges()) {
        if (e.label.name == label) ++n;
    }
    return n;
}

} // namespace

ScenarioOutcome run_scenario(const SpecFile& spec, SyncPolicy policy, std::size_t max_steps) {
    ScenarioOutcome outcome;
    Hypergraph current = spec.graph;
    outcome.trace.initial_digest = graph_digest(current);
    outcome.initial_dot = to_dot(current);

    ProductionRegistry file_registry = build_registry(spec);
    ProductionRegistry own_productions;
    for (const auto& p : spec.productions) own_productions.add(p);

    auto record_step = [&](const Transition& t) {
        TraceStep step;
        step.step = outcome.trace.steps.size();
        step.assignment = t.assignment;
        step.fired = t.fired;
        step.fusion = t.fusion;
        current = t.result;
        step.result_digest = graph_digest(current);
        outcome.trace.steps.push_back(std::move(step));
        outcome.step_dots.push_back(to_dot(current));
    };

    if (spec.scenario) {
        // Injecting arms the matching rules; the next apply then indexes the
        // armed transitions instead of the plain enumeration.
        std::vector<ArmedEmission> pending;
        bool has_pending = false;
        for (const auto& step : spec.scenario->steps) {
            if (const auto* inject = std::get_if<Inject>(&step)) {
                EvaluationResult eval =
                    evaluate(spec.rules, Event{inject->event, {}}, current, spec.edge_names);
                pending = std::move(eval.armed);
                has_pending = true;
            } else if (const auto* apply_step = std::get_if<ApplyStep>(&step)) {
                if (outcome.trace.steps.size() >= max_steps) {
                    outcome.budget_exhausted = true;
                    break;
                }
                std::vector<Transition> transitions =
                    has_pending ? policy_transitions(current, own_productions, pending, policy)
                                : applicable_steps(current, file_registry, policy);
                if (apply_step->index >= transitions.size()) {
                    outcome.passed = false;
                    outcome.failure = "apply " + std::to_string(apply_step->index) +
                                      ": only " + std::to_string(transitions.size()) +
                                      " transition(s) available";
                    break;
                }
                record_step(transitions[apply_step->index]);
                pending.clear();
                has_pending = false;
            } else if (const auto* count = std::get_if<AssertCount>(&step)) {
                std::size_t n = count_label(current, count->label);
                if (!compare(n, count->cmp, count->value)) {
                    outcome.passed = false;
                    outcome.failure = "assert count(" + count->label + ") " +
                                      to_string(count->cmp) + " " +
                                      std::to_string(count->value) + " failed: count is " +
                                      std::to_string(n);
                    break;
                }
            } else if (const auto* iso = std::get_if<AssertIso>(&step)) {
                if (!is_isomorphic(current, iso->expected)) {
                    outcome.passed = false;
                    outcome.failure = "assert isomorphic failed: the current graph does not "
                                      "match the expected shape";
                    break;
                }
            }
        }
    } else {
        // No scenario: rewrite to quiescence under the step budget.
        while (outcome.trace.steps.size() < max_steps) {
            std::vector<Transition> transitions =
                applicable_steps(current, file_registry, policy);
            if (transitions.empty()) {
                outcome.trace.reached_quiescence = true;
                break;
            }
            record_step(transitions.front());
        }
        if (!outcome.trace.reached_quiescence) {
            if (applicable_steps(current, file_registry, policy).empty()) {
                outcome.trace.reached_quiescence = true;
            } else {
                outcome.budget_exhausted = true;
            }
        }
    }

    outcome.trace.final_graph = current;
    outcome.final_graph = std::move(current);
    return outcome;
}

} // namespace shr
