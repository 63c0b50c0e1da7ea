#include "doctest.h"

#include "shr.h"

#include "json.hpp"

#include <cstring>
#include <string>

namespace {

std::string fixture_path(const std::string& name) {
    return std::string(SHR_FIXTURE_DIR) + "/" + name;
}

// Takes ownership of a returned text and hands back a std::string.
std::string take(char* text) {
    REQUIRE(text != nullptr);
    std::string out(text);
    shr_text_free(text);
    return out;
}

struct SpecHandle {
    shr_spec* ptr = nullptr;
    ~SpecHandle() { shr_spec_free(ptr); }
};

struct StepsHandle {
    shr_steps* ptr = nullptr;
    ~StepsHandle() { shr_steps_free(ptr); }
};

struct RunHandle {
    shr_run* ptr = nullptr;
    ~RunHandle() { shr_run_free(ptr); }
};

const char* minimal_spec = "labels {\n  f/1;\n}\n\ngraph {\n  node a;\n  edge f(a);\n}\n";

} // namespace

TEST_CASE("the library reports its version") {
    CHECK(std::string(shr_version()) == "0.1.0");
}

TEST_CASE("specifications parse from text and from disk") {
    SpecHandle from_text;
    CHECK(shr_spec_parse(minimal_spec, &from_text.ptr) == SHR_OK);
    CHECK(shr_spec_ok(from_text.ptr) == 1);
    CHECK(shr_spec_diagnostic_count(from_text.ptr) == 0);

    SpecHandle from_file;
    CHECK(shr_spec_parse_file(fixture_path("migration.shr").c_str(), &from_file.ptr) == SHR_OK);
    CHECK(shr_spec_ok(from_file.ptr) == 1);
}

TEST_CASE("parse failures carry diagnostics on the returned handle") {
    SpecHandle spec;
    CHECK(shr_spec_parse_file(fixture_path("invalid_arity.shr").c_str(), &spec.ptr) ==
          SHR_ERR_PARSE);
    REQUIRE(spec.ptr != nullptr);
    CHECK(shr_spec_ok(spec.ptr) == 0);
    REQUIRE(shr_spec_diagnostic_count(spec.ptr) == 2);

    char* text = nullptr;
    REQUIRE(shr_spec_diagnostic_at(spec.ptr, 0, &text) == SHR_OK);
    CHECK(take(text).find("EDGE_ARITY_MISMATCH") != std::string::npos);
    CHECK(shr_spec_diagnostic_at(spec.ptr, 9, &text) == SHR_ERR_INDEX);

    // Operations on a failed spec refuse with a parse error.
    CHECK(shr_spec_canonical(spec.ptr, &text) == SHR_ERR_PARSE);
    StepsHandle steps;
    CHECK(shr_steps_enumerate(spec.ptr, SHR_POLICY_MILNER, &steps.ptr) == SHR_ERR_PARSE);

    SpecHandle missing;
    CHECK(shr_spec_parse_file("/nonexistent/nowhere.shr", &missing.ptr) == SHR_ERR_ARGUMENT);
}

TEST_CASE("null handles and null out-parameters are rejected") {
    CHECK(shr_spec_parse(nullptr, nullptr) == SHR_ERR_ARGUMENT);
    CHECK(shr_spec_ok(nullptr) == 0);
    CHECK(shr_spec_diagnostic_count(nullptr) == 0);
    CHECK(shr_spec_canonical(nullptr, nullptr) == SHR_ERR_ARGUMENT);
    CHECK(shr_spec_graph_dot(nullptr, nullptr) == SHR_ERR_ARGUMENT);
    CHECK(shr_steps_enumerate(nullptr, SHR_POLICY_MILNER, nullptr) == SHR_ERR_ARGUMENT);
    CHECK(shr_steps_count(nullptr) == 0);
    CHECK(shr_steps_describe(nullptr, 0, nullptr) == SHR_ERR_ARGUMENT);
    CHECK(shr_steps_apply(nullptr, 0, nullptr) == SHR_ERR_ARGUMENT);
    CHECK(shr_run_scenario(nullptr, SHR_POLICY_MILNER, 10, nullptr) == SHR_ERR_ARGUMENT);
    CHECK(shr_run_step_count(nullptr) == 0);
    CHECK(shr_run_trace_line(nullptr, 0, nullptr) == SHR_ERR_ARGUMENT);
    CHECK(shr_run_step_dot(nullptr, 0, 0, nullptr) == SHR_ERR_ARGUMENT);
    CHECK(shr_run_passed(nullptr) == 0);
    CHECK(shr_run_failure(nullptr, nullptr) == SHR_ERR_ARGUMENT);
    CHECK(shr_run_final_canonical(nullptr, nullptr) == SHR_ERR_ARGUMENT);

    SpecHandle spec;
    REQUIRE(shr_spec_parse(minimal_spec, &spec.ptr) == SHR_OK);
    CHECK(shr_spec_canonical(spec.ptr, nullptr) == SHR_ERR_ARGUMENT);

    // Frees accept NULL quietly.
    shr_spec_free(nullptr);
    shr_steps_free(nullptr);
    shr_run_free(nullptr);
    shr_text_free(nullptr);
}

TEST_CASE("canonical text and DOT render through the interface") {
    SpecHandle spec;
    REQUIRE(shr_spec_parse(minimal_spec, &spec.ptr) == SHR_OK);

    char* text = nullptr;
    REQUIRE(shr_spec_canonical(spec.ptr, &text) == SHR_OK);
    std::string canon = take(text);
    CHECK(canon.find("labels {\n  f/1;\n}\n") != std::string::npos);
    CHECK(canon.find("edge f(a);") != std::string::npos);

    REQUIRE(shr_spec_graph_dot(spec.ptr, &text) == SHR_OK);
    std::string dot = take(text);
    CHECK(dot.find("graph shr {") != std::string::npos);
    CHECK(dot.find("shape=point") != std::string::npos);
    CHECK(dot.find("shape=box") != std::string::npos);

    // The canonical text parses back to an equal canonical form.
    SpecHandle again;
    REQUIRE(shr_spec_parse(canon.c_str(), &again.ptr) == SHR_OK);
    REQUIRE(shr_spec_canonical(again.ptr, &text) == SHR_OK);
    CHECK(take(text) == canon);
}

TEST_CASE("transitions enumerate, describe, and apply through handles") {
    SpecHandle spec;
    REQUIRE(shr_spec_parse_file(fixture_path("migration.shr").c_str(), &spec.ptr) == SHR_OK);

    StepsHandle steps;
    REQUIRE(shr_steps_enumerate(spec.ptr, SHR_POLICY_MILNER, &steps.ptr) == SHR_OK);
    REQUIRE(shr_steps_count(steps.ptr) == 1);

    char* text = nullptr;
    REQUIRE(shr_steps_describe(steps.ptr, 0, &text) == SHR_OK);
    std::string described = take(text);
    CHECK(described.find("am_start") != std::string::npos);
    CHECK(described.find("result digest: fnv1a64:") != std::string::npos);
    CHECK(shr_steps_describe(steps.ptr, 1, &text) == SHR_ERR_INDEX);

    SpecHandle successor;
    REQUIRE(shr_steps_apply(steps.ptr, 0, &successor.ptr) == SHR_OK);
    CHECK(shr_spec_ok(successor.ptr) == 1);
    REQUIRE(shr_spec_canonical(successor.ptr, &text) == SHR_OK);
    std::string canon = take(text);
    CHECK(canon.find("sigma") != std::string::npos);
    CHECK(canon.find("scenario") == std::string::npos); // successors drop the script

    // The successor is a well-formed spec in its own right.
    SpecHandle reparsed;
    CHECK(shr_spec_parse(canon.c_str(), &reparsed.ptr) == SHR_OK);
    CHECK(shr_spec_ok(reparsed.ptr) == 1);

    CHECK(shr_steps_apply(steps.ptr, 7, &successor.ptr) == SHR_ERR_INDEX);
}

TEST_CASE("policies flow through enumeration") {
    SpecHandle spec;
    REQUIRE(shr_spec_parse_file(fixture_path("broadcast_go.shr").c_str(), &spec.ptr) == SHR_OK);
    StepsHandle milner, broadcast;
    REQUIRE(shr_steps_enumerate(spec.ptr, SHR_POLICY_MILNER, &milner.ptr) == SHR_OK);
    REQUIRE(shr_steps_enumerate(spec.ptr, SHR_POLICY_BROADCAST, &broadcast.ptr) == SHR_OK);
    CHECK(shr_steps_count(milner.ptr) == 2);
    CHECK(shr_steps_count(broadcast.ptr) == 1);
}

TEST_CASE("a passing scenario reports its trace and final state") {
    SpecHandle spec;
    REQUIRE(shr_spec_parse_file(fixture_path("migration.shr").c_str(), &spec.ptr) == SHR_OK);

    RunHandle run;
    REQUIRE(shr_run_scenario(spec.ptr, SHR_POLICY_MILNER, 100, &run.ptr) == SHR_OK);
    CHECK(shr_run_passed(run.ptr) == 1);
    REQUIRE(shr_run_step_count(run.ptr) == 1);

    char* text = nullptr;
    REQUIRE(shr_run_failure(run.ptr, &text) == SHR_OK);
    CHECK(take(text).empty());

    REQUIRE(shr_run_trace_line(run.ptr, 0, &text) == SHR_OK);
    auto j = nlohmann::json::parse(take(text));
    CHECK(j["step"] == 0);
    CHECK(j["assignment"].is_object());
    CHECK(j["fired"].is_array());
    CHECK(j["fusion"].is_array());
    CHECK(j["result_digest"].is_string());
    CHECK(shr_run_trace_line(run.ptr, 1, &text) == SHR_ERR_INDEX);

    REQUIRE(shr_run_step_dot(run.ptr, 0, 1, &text) == SHR_OK);
    std::string initial_dot = take(text);
    REQUIRE(shr_run_step_dot(run.ptr, 0, 0, &text) == SHR_OK);
    std::string after_dot = take(text);
    CHECK(initial_dot != after_dot); // the step changed the graph
    CHECK(initial_dot.find("graph shr {") != std::string::npos);
    CHECK(shr_run_step_dot(run.ptr, 5, 0, &text) == SHR_ERR_INDEX);

    REQUIRE(shr_run_final_canonical(run.ptr, &text) == SHR_OK);
    std::string final_canon = take(text);
    // Final state of the move: two stores, worker at the manager location.
    CHECK(final_canon.find("sigma") != std::string::npos);
    SpecHandle final_spec;
    CHECK(shr_spec_parse(final_canon.c_str(), &final_spec.ptr) == SHR_OK);
}

TEST_CASE("a failing assertion surfaces as a status with its message") {
    std::string text = std::string(minimal_spec) +
                       "\nscenario {\n  assert count(f) == 5;\n}\n";
    SpecHandle spec;
    REQUIRE(shr_spec_parse(text.c_str(), &spec.ptr) == SHR_OK);

    RunHandle run;
    CHECK(shr_run_scenario(spec.ptr, SHR_POLICY_MILNER, 10, &run.ptr) == SHR_ERR_ASSERTION);
    REQUIRE(run.ptr != nullptr);
    CHECK(shr_run_passed(run.ptr) == 0);

    char* failure = nullptr;
    REQUIRE(shr_run_failure(run.ptr, &failure) == SHR_OK);
    std::string message = take(failure);
    CHECK(message.find("count(f)") != std::string::npos);
    CHECK(message.find("1") != std::string::npos); // the observed census
}

TEST_CASE("a scripted farm scales to three workers through the interface") {
    SpecHandle spec;
    REQUIRE(shr_spec_parse_file(fixture_path("producer_farm.shr").c_str(), &spec.ptr) ==
            SHR_OK);
    RunHandle run;
    REQUIRE(shr_run_scenario(spec.ptr, SHR_POLICY_MILNER, 100, &run.ptr) == SHR_OK);
    CHECK(shr_run_passed(run.ptr) == 1);
    CHECK(shr_run_step_count(run.ptr) == 2);

    char* text = nullptr;
    REQUIRE(shr_run_final_canonical(run.ptr, &text) == SHR_OK);
    std::string canon = take(text);
    // Worker edges render as "edge f(...)" or "edge NAME: f(...)".
    std::size_t f_edges = 0;
    for (std::size_t at = canon.find(" f("); at != std::string::npos;
         at = canon.find(" f(", at + 1)) {
        ++f_edges;
    }
    CHECK(f_edges == 3);
}
