#include "shr.h"

#include "shr/dsl.hpp"
#include "shr/scenario.hpp"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>

struct shr_spec {
    shr::SpecFile spec;
    std::vector<shr::Diagnostic> diagnostics;
    bool parsed_ok = false;
};

struct shr_steps {
    shr::SpecFile spec;
    std::vector<shr::Transition> transitions;
};

struct shr_run {
    shr::SpecFile spec;
    shr::ScenarioOutcome outcome;
};

namespace {

char* dup_text(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

shr_status set_out(char** out, const std::string& s) {
    if (!out) return SHR_ERR_ARGUMENT;
    *out = dup_text(s);
    return *out ? SHR_OK : SHR_ERR_INTERNAL;
}

bool to_policy(shr_policy in, shr::SyncPolicy& out) {
    switch (in) {
        case SHR_POLICY_MILNER: out = shr::SyncPolicy::Milner; return true;
        case SHR_POLICY_BROADCAST: out = shr::SyncPolicy::Broadcast; return true;
    }
    return false;
}

std::map<shr::EdgeId, std::string> surviving_names(const std::map<shr::EdgeId, std::string>& names,
                                                   const shr::Hypergraph& graph) {
    std::map<shr::EdgeId, std::string> out;
    for (const auto& [id, name] : names) {
        if (graph.has_edge(id)) out.emplace(id, name);
    }
    return out;
}

shr::SpecFile successor_spec(const shr::SpecFile& base, const shr::Hypergraph& graph) {
    shr::SpecFile next = base;
    next.graph = graph;
    next.edge_names = surviving_names(base.edge_names, graph);
    next.scenario.reset();
    return next;
}

} // namespace

extern "C" {

const char* shr_version(void) { return "0.1.0"; }

shr_status shr_spec_parse(const char* text, shr_spec** out) {
    if (!text || !out) return SHR_ERR_ARGUMENT;
    *out = nullptr;
    try {
        auto handle = std::make_unique<shr_spec>();
        shr::ParseResult result = shr::parse(text);
        handle->spec = std::move(result.spec);
        handle->diagnostics = std::move(result.diagnostics);
        handle->parsed_ok = handle->diagnostics.empty();
        bool ok = handle->parsed_ok;
        *out = handle.release();
        return ok ? SHR_OK : SHR_ERR_PARSE;
    } catch (...) {
        return SHR_ERR_INTERNAL;
    }
}

shr_status shr_spec_parse_file(const char* path, shr_spec** out) {
    if (!path || !out) return SHR_ERR_ARGUMENT;
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in) return SHR_ERR_ARGUMENT;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    return shr_spec_parse(text.c_str(), out);
}

void shr_spec_free(shr_spec* spec) { delete spec; }

int shr_spec_ok(const shr_spec* spec) { return spec && spec->parsed_ok ? 1 : 0; }

size_t shr_spec_diagnostic_count(const shr_spec* spec) {
    return spec ? spec->diagnostics.size() : 0;
}

shr_status shr_spec_diagnostic_at(const shr_spec* spec, size_t index, char** out) {
    if (!spec || !out) return SHR_ERR_ARGUMENT;
    if (index >= spec->diagnostics.size()) return SHR_ERR_INDEX;
    return set_out(out, shr::format_diagnostic(spec->diagnostics[index]));
}

shr_status shr_spec_canonical(const shr_spec* spec, char** out) {
    if (!spec || !out) return SHR_ERR_ARGUMENT;
    if (!spec->parsed_ok) return SHR_ERR_PARSE;
    try {
        return set_out(out, shr::serialize(spec->spec));
    } catch (...) {
        return SHR_ERR_INTERNAL;
    }
}

shr_status shr_spec_graph_dot(const shr_spec* spec, char** out) {
    if (!spec || !out) return SHR_ERR_ARGUMENT;
    if (!spec->parsed_ok) return SHR_ERR_PARSE;
    try {
        return set_out(out, shr::to_dot(spec->spec.graph));
    } catch (...) {
        return SHR_ERR_INTERNAL;
    }
}

void shr_text_free(char* text) { delete[] text; }

shr_status shr_steps_enumerate(const shr_spec* spec, shr_policy policy, shr_steps** out) {
    if (!spec || !out) return SHR_ERR_ARGUMENT;
    *out = nullptr;
    shr::SyncPolicy pol{};
    if (!to_policy(policy, pol)) return SHR_ERR_ARGUMENT;
    if (!spec->parsed_ok) return SHR_ERR_PARSE;
    try {
        auto handle = std::make_unique<shr_steps>();
        handle->spec = spec->spec;
        handle->transitions =
            shr::applicable_steps(spec->spec.graph, shr::build_registry(spec->spec), pol);
        *out = handle.release();
        return SHR_OK;
    } catch (...) {
        return SHR_ERR_INTERNAL;
    }
}

size_t shr_steps_count(const shr_steps* steps) { return steps ? steps->transitions.size() : 0; }

shr_status shr_steps_describe(const shr_steps* steps, size_t index, char** out) {
    if (!steps || !out) return SHR_ERR_ARGUMENT;
    if (index >= steps->transitions.size()) return SHR_ERR_INDEX;
    try {
        return set_out(out, shr::describe_transition(steps->transitions[index], steps->spec.edge_names));
    } catch (...) {
        return SHR_ERR_INTERNAL;
    }
}

shr_status shr_steps_apply(const shr_steps* steps, size_t index, shr_spec** out) {
    if (!steps || !out) return SHR_ERR_ARGUMENT;
    *out = nullptr;
    if (index >= steps->transitions.size()) return SHR_ERR_INDEX;
    try {
        auto handle = std::make_unique<shr_spec>();
        handle->spec = successor_spec(steps->spec, steps->transitions[index].result);
        handle->parsed_ok = true;
        *out = handle.release();
        return SHR_OK;
    } catch (...) {
        return SHR_ERR_INTERNAL;
    }
}

void shr_steps_free(shr_steps* steps) { delete steps; }

shr_status shr_run_scenario(const shr_spec* spec, shr_policy policy, size_t max_steps,
                            shr_run** out) {
    if (!spec || !out) return SHR_ERR_ARGUMENT;
    *out = nullptr;
    shr::SyncPolicy pol{};
    if (!to_policy(policy, pol)) return SHR_ERR_ARGUMENT;
    if (!spec->parsed_ok) return SHR_ERR_PARSE;
    try {
        auto handle = std::make_unique<shr_run>();
        handle->spec = spec->spec;
        handle->outcome = shr::run_scenario(handle->spec, pol, max_steps);
        bool passed = handle->outcome.passed;
        *out = handle.release();
        return passed ? SHR_OK : SHR_ERR_ASSERTION;
    } catch (...) {
        return SHR_ERR_INTERNAL;
    }
}

size_t shr_run_step_count(const shr_run* run) {
    return run ? run->outcome.trace.steps.size() : 0;
}

shr_status shr_run_trace_line(const shr_run* run, size_t index, char** out) {
    if (!run || !out) return SHR_ERR_ARGUMENT;
    if (index >= run->outcome.trace.steps.size()) return SHR_ERR_INDEX;
    try {
        return set_out(out, shr::trace_step_json(run->outcome.trace.steps[index]));
    } catch (...) {
        return SHR_ERR_INTERNAL;
    }
}

shr_status shr_run_step_dot(const shr_run* run, size_t index, int initial, char** out) {
    if (!run || !out) return SHR_ERR_ARGUMENT;
    if (initial) return set_out(out, run->outcome.initial_dot);
    if (index >= run->outcome.step_dots.size()) return SHR_ERR_INDEX;
    return set_out(out, run->outcome.step_dots[index]);
}

int shr_run_passed(const shr_run* run) { return run && run->outcome.passed ? 1 : 0; }

shr_status shr_run_failure(const shr_run* run, char** out) {
    if (!run || !out) return SHR_ERR_ARGUMENT;
    return set_out(out, run->outcome.failure);
}

shr_status shr_run_final_canonical(const shr_run* run, char** out) {
    if (!run || !out) return SHR_ERR_ARGUMENT;
    try {
        return set_out(out, shr::serialize(successor_spec(run->spec, run->outcome.final_graph)));
    } catch (...) {
        return SHR_ERR_INTERNAL;
    }
}

void shr_run_free(shr_run* run) { delete run; }

} // extern "C"
