#include "doctest.h"

#include "shr/scenario.hpp"

#include <fstream>
#include <sstream>

using namespace shr;

namespace {

SpecFile load_fixture(const std::string& name) {
    std::ifstream in(std::string(SHR_FIXTURE_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream text;
    text << in.rdbuf();
    ParseResult r = parse(text.str());
    REQUIRE(r.ok());
    return std::move(r.spec);
}

SpecFile load_text(const std::string& text) {
    ParseResult r = parse(text);
    REQUIRE(r.ok());
    return std::move(r.spec);
}

std::size_t count_label(const Hypergraph& g, const std::string& label) {
    std::size_t n = 0;
    for (const auto& e : g.edges()) n += (e.label.name == label);
    return n;
}

} // namespace

TEST_CASE("scripted fixtures run their assertions to completion") {
    for (const char* name : {"migration.shr", "kill_worker.shr", "copy_store.shr",
                             "replicate_fresh.shr", "producer_farm.shr"}) {
        CAPTURE(name);
        ScenarioOutcome outcome = run_scenario(load_fixture(name), SyncPolicy::Milner, 100);
        CHECK(outcome.passed);
        CHECK(outcome.failure.empty());
        CHECK_FALSE(outcome.budget_exhausted);
        CHECK(outcome.step_dots.size() == outcome.trace.steps.size());
        CHECK_FALSE(outcome.initial_dot.empty());
    }
}

TEST_CASE("the farm scenario records two steps and the scaled final graph") {
    ScenarioOutcome outcome =
        run_scenario(load_fixture("producer_farm.shr"), SyncPolicy::Milner, 100);
    REQUIRE(outcome.passed);
    CHECK(outcome.trace.steps.size() == 2);
    CHECK(count_label(outcome.final_graph, "f") == 3);
    CHECK(count_label(outcome.final_graph, "sigma") == 1);
    CHECK(outcome.trace.steps[1].result_digest == graph_digest(outcome.final_graph));
}

TEST_CASE("an unscripted spec rewrites to quiescence") {
    ScenarioOutcome outcome =
        run_scenario(load_fixture("handshake_once.shr"), SyncPolicy::Milner, 10);
    CHECK(outcome.passed);
    CHECK(outcome.trace.steps.size() == 1);
    CHECK(outcome.trace.reached_quiescence);
    CHECK_FALSE(outcome.budget_exhausted);
}

TEST_CASE("a zero budget on an active graph reports exhaustion, not failure") {
    ScenarioOutcome outcome =
        run_scenario(load_fixture("handshake_once.shr"), SyncPolicy::Milner, 0);
    CHECK(outcome.passed);
    CHECK(outcome.trace.steps.empty());
    CHECK(outcome.budget_exhausted);
    CHECK_FALSE(outcome.trace.reached_quiescence);
    CHECK(outcome.final_graph == load_fixture("handshake_once.shr").graph);
}

TEST_CASE("a zero budget on a quiescent graph still counts as quiescent") {
    SpecFile spec = load_text("labels {\n  f/1;\n}\n\ngraph {\n  node a;\n  edge f(a);\n}\n");
    ScenarioOutcome outcome = run_scenario(spec, SyncPolicy::Milner, 0);
    CHECK(outcome.passed);
    CHECK(outcome.trace.reached_quiescence);
    CHECK_FALSE(outcome.budget_exhausted);
}

TEST_CASE("an apply beyond the enumeration fails with the available census") {
    SpecFile spec = load_fixture("migration.shr");
    REQUIRE(spec.scenario.has_value());
    spec.scenario->steps[0] = ApplyStep{7};
    ScenarioOutcome outcome = run_scenario(spec, SyncPolicy::Milner, 100);
    CHECK_FALSE(outcome.passed);
    CHECK(outcome.failure == "apply 7: only 1 transition(s) available");
    CHECK(outcome.trace.steps.empty());
}

TEST_CASE("an inject that arms nothing leaves the next apply empty-handed") {
    SpecFile spec = load_fixture("kill_worker.shr");
    REQUIRE(spec.scenario.has_value());
    spec.scenario->steps[0] = Inject{"nonevent"};
    ScenarioOutcome outcome = run_scenario(spec, SyncPolicy::Milner, 100);
    CHECK_FALSE(outcome.passed);
    CHECK(outcome.failure == "apply 0: only 0 transition(s) available");
}

TEST_CASE("count assertions report the observed census on failure") {
    SpecFile spec = load_text(
        "labels {\n  f/1;\n}\n\ngraph {\n  node a;\n  edge f(a);\n}\n"
        "\nscenario {\n  assert count(f) >= 4;\n}\n");
    ScenarioOutcome outcome = run_scenario(spec, SyncPolicy::Milner, 10);
    CHECK_FALSE(outcome.passed);
    CHECK(outcome.failure == "assert count(f) >= 4 failed: count is 1");
}

TEST_CASE("isomorphism assertions fail on a mismatched shape") {
    SpecFile spec = load_text(
        "labels {\n  f/1;\n}\n\ngraph {\n  node a;\n  edge f(a);\n}\n"
        "\nscenario {\n  assert isomorphic graph {\n    node a, b;\n    edge f(a);\n  };\n}\n");
    ScenarioOutcome outcome = run_scenario(spec, SyncPolicy::Milner, 10);
    CHECK_FALSE(outcome.passed);
    CHECK(outcome.failure.find("isomorphic") != std::string::npos);
}

TEST_CASE("the step budget interrupts a scripted run before the next apply") {
    ScenarioOutcome outcome =
        run_scenario(load_fixture("producer_farm.shr"), SyncPolicy::Milner, 1);
    CHECK(outcome.passed); // no assertion was violated, the budget just ran out
    CHECK(outcome.budget_exhausted);
    CHECK(outcome.trace.steps.size() == 1);
}

TEST_CASE("a failed assertion stops the script at the failing step") {
    SpecFile spec = load_fixture("producer_farm.shr");
    REQUIRE(spec.scenario.has_value());
    // Corrupt the first count assertion; the second inject must never run.
    spec.scenario->steps[2] = AssertCount{"f", Cmp::Eq, 99};
    ScenarioOutcome outcome = run_scenario(spec, SyncPolicy::Milner, 100);
    CHECK_FALSE(outcome.passed);
    CHECK(outcome.trace.steps.size() == 1);
    CHECK(outcome.failure == "assert count(f) == 99 failed: count is 2");
}
