// Command-line front end. Talks to the engine exclusively through the C API
// in shr.h, the same surface other language bindings would use.

#include "shr.h"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#ifdef _WIN32
#include <io.h>
#define SHR_ISATTY _isatty
#define SHR_FILENO _fileno
#else
#include <unistd.h>
#define SHR_ISATTY isatty
#define SHR_FILENO fileno
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAssertion = 2;
constexpr int kExitInternal = 3;

struct SpecDeleter {
    void operator()(shr_spec* s) const { shr_spec_free(s); }
};
struct StepsDeleter {
    void operator()(shr_steps* s) const { shr_steps_free(s); }
};
struct RunDeleter {
    void operator()(shr_run* r) const { shr_run_free(r); }
};

using SpecPtr = std::unique_ptr<shr_spec, SpecDeleter>;
using StepsPtr = std::unique_ptr<shr_steps, StepsDeleter>;
using RunPtr = std::unique_ptr<shr_run, RunDeleter>;

// Fetched strings are freed as soon as the copy is taken.
std::string take_text(char* text) {
    std::string out = text ? text : "";
    shr_text_free(text);
    return out;
}

bool color_enabled() {
    if (const char* env = std::getenv("SHR_COLOR")) {
        return std::string(env) == "1";
    }
    return SHR_ISATTY(SHR_FILENO(stderr)) != 0;
}

void print_error(const std::string& message) {
    if (color_enabled()) {
        std::cerr << "\033[1;31merror:\033[0m " << message << "\n";
    } else {
        std::cerr << "error: " << message << "\n";
    }
}

void print_diagnostics(const shr_spec* spec) {
    bool color = color_enabled();
    size_t n = shr_spec_diagnostic_count(spec);
    for (size_t i = 0; i < n; ++i) {
        char* text = nullptr;
        if (shr_spec_diagnostic_at(spec, i, &text) == SHR_OK) {
            std::string line = take_text(text);
            if (color) {
                std::cerr << "\033[1;31m" << line << "\033[0m\n";
            } else {
                std::cerr << line << "\n";
            }
        }
    }
}

// Parses the file; on failure prints diagnostics and leaves the handle empty.
SpecPtr load_spec(const std::string& path) {
    shr_spec* raw = nullptr;
    shr_status status = shr_spec_parse_file(path.c_str(), &raw);
    SpecPtr spec(raw);
    if (status == SHR_ERR_ARGUMENT) {
        print_error("cannot read '" + path + "'");
        return nullptr;
    }
    if (!spec || !shr_spec_ok(spec.get())) {
        if (spec) print_diagnostics(spec.get());
        return nullptr;
    }
    return spec;
}

bool write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        print_error("cannot write '" + path + "'");
        return false;
    }
    out << content;
    return out.good();
}

shr_policy parse_policy(const std::string& name) {
    return name == "broadcast" ? SHR_POLICY_BROADCAST : SHR_POLICY_MILNER;
}

int cmd_validate(const std::string& path) {
    SpecPtr spec = load_spec(path);
    if (!spec) return kExitUsage;
    std::cout << "ok\n";
    return kExitOk;
}

int cmd_steps(const std::string& path, const std::string& policy) {
    SpecPtr spec = load_spec(path);
    if (!spec) return kExitUsage;
    shr_steps* raw = nullptr;
    if (shr_steps_enumerate(spec.get(), parse_policy(policy), &raw) != SHR_OK) {
        print_error("could not enumerate transitions");
        return kExitInternal;
    }
    StepsPtr steps(raw);
    size_t n = shr_steps_count(steps.get());
    for (size_t i = 0; i < n; ++i) {
        char* text = nullptr;
        if (shr_steps_describe(steps.get(), i, &text) != SHR_OK) {
            print_error("could not describe transition " + std::to_string(i));
            return kExitInternal;
        }
        std::cout << "transition " << i << ":\n" << take_text(text) << "\n";
    }
    std::cout << n << (n == 1 ? " transition\n" : " transitions\n");
    return kExitOk;
}

int cmd_apply(const std::string& path, size_t index, const std::string& out_path,
              const std::string& policy) {
    SpecPtr spec = load_spec(path);
    if (!spec) return kExitUsage;
    shr_steps* raw_steps = nullptr;
    if (shr_steps_enumerate(spec.get(), parse_policy(policy), &raw_steps) != SHR_OK) {
        print_error("could not enumerate transitions");
        return kExitInternal;
    }
    StepsPtr steps(raw_steps);
    shr_spec* raw_next = nullptr;
    shr_status status = shr_steps_apply(steps.get(), index, &raw_next);
    if (status == SHR_ERR_INDEX) {
        size_t n = shr_steps_count(steps.get());
        print_error("transition index " + std::to_string(index) + " out of range (" +
                    std::to_string(n) + (n == 1 ? " transition)" : " transitions)"));
        return kExitUsage;
    }
    SpecPtr next(raw_next);
    if (status != SHR_OK || !next) {
        print_error("could not apply transition");
        return kExitInternal;
    }
    char* text = nullptr;
    if (shr_spec_canonical(next.get(), &text) != SHR_OK) {
        print_error("could not serialize the successor");
        return kExitInternal;
    }
    return write_output(out_path, take_text(text)) ? kExitOk : kExitUsage;
}

int cmd_run(const std::string& path, const std::string& policy, size_t max_steps,
            const std::string& trace_path, const std::string& dot_dir) {
    SpecPtr spec = load_spec(path);
    if (!spec) return kExitUsage;
    shr_run* raw = nullptr;
    shr_status status = shr_run_scenario(spec.get(), parse_policy(policy), max_steps, &raw);
    RunPtr run(raw);
    if (!run || (status != SHR_OK && status != SHR_ERR_ASSERTION)) {
        print_error("scenario execution failed");
        return kExitInternal;
    }

    std::string trace;
    size_t n = shr_run_step_count(run.get());
    for (size_t i = 0; i < n; ++i) {
        char* line = nullptr;
        if (shr_run_trace_line(run.get(), i, &line) != SHR_OK) {
            print_error("could not render trace step " + std::to_string(i));
            return kExitInternal;
        }
        trace += take_text(line);
        trace += "\n";
    }
    if (!write_output(trace_path, trace)) return kExitUsage;

    // A zero budget executes nothing and writes nothing beyond the trace.
    if (!dot_dir.empty() && max_steps > 0) {
        std::error_code ec;
        std::filesystem::create_directories(dot_dir, ec);
        if (ec) {
            print_error("cannot create '" + dot_dir + "': " + ec.message());
            return kExitUsage;
        }
        char* dot = nullptr;
        if (shr_run_step_dot(run.get(), 0, 1, &dot) != SHR_OK) {
            print_error("could not render the initial graph");
            return kExitInternal;
        }
        if (!write_output(dot_dir + "/initial.dot", take_text(dot))) return kExitUsage;
        for (size_t i = 0; i < n; ++i) {
            if (shr_run_step_dot(run.get(), i, 0, &dot) != SHR_OK) {
                print_error("could not render step " + std::to_string(i));
                return kExitInternal;
            }
            if (!write_output(dot_dir + "/step-" + std::to_string(i) + ".dot", take_text(dot))) {
                return kExitUsage;
            }
        }
    }

    if (!shr_run_passed(run.get())) {
        char* failure = nullptr;
        if (shr_run_failure(run.get(), &failure) == SHR_OK) {
            print_error(take_text(failure));
        }
        return kExitAssertion;
    }
    return kExitOk;
}

int cmd_dot(const std::string& path, const std::string& out_path) {
    SpecPtr spec = load_spec(path);
    if (!spec) return kExitUsage;
    char* text = nullptr;
    if (shr_spec_graph_dot(spec.get(), &text) != SHR_OK) {
        print_error("could not render the graph");
        return kExitInternal;
    }
    return write_output(out_path, take_text(text)) ? kExitOk : kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        CLI::App app{"synchronized hyperedge replacement engine"};
        app.set_version_flag("--version", std::string(shr_version()));
        app.require_subcommand(1);

        std::string policy = "milner";
        app.add_option("--policy", policy, "synchronization policy")
            ->check(CLI::IsMember({"milner", "broadcast"}))
            ->capture_default_str();

        std::string validate_path;
        CLI::App* validate = app.add_subcommand("validate", "parse and check a specification");
        validate->add_option("file", validate_path, "specification file")->required();

        std::string steps_path;
        CLI::App* steps = app.add_subcommand("steps", "list the applicable transitions");
        steps->add_option("file", steps_path, "specification file")->required();

        std::string apply_path;
        size_t apply_index = 0;
        std::string apply_out;
        CLI::App* apply = app.add_subcommand("apply", "apply one transition");
        apply->add_option("file", apply_path, "specification file")->required();
        apply->add_option("index", apply_index, "transition index")->required();
        apply->add_option("--out", apply_out, "write the successor here instead of stdout");

        std::string run_path;
        size_t run_max_steps = 1000;
        std::string run_trace;
        std::string run_dot_dir;
        CLI::App* run = app.add_subcommand("run", "execute the scenario");
        run->add_option("file", run_path, "specification file")->required();
        run->add_option("--max-steps", run_max_steps, "step budget")->capture_default_str();
        run->add_option("--trace", run_trace, "trace file ('-' for stdout)");
        run->add_option("--dot-dir", run_dot_dir, "write per-step DOT files here");

        std::string dot_path;
        std::string dot_out;
        CLI::App* dot = app.add_subcommand("dot", "render the initial graph as DOT");
        dot->add_option("file", dot_path, "specification file")->required();
        dot->add_option("--out", dot_out, "write here instead of stdout");

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            return app.exit(e) == 0 ? kExitOk : kExitUsage;
        }

        if (validate->parsed()) return cmd_validate(validate_path);
        if (steps->parsed()) return cmd_steps(steps_path, policy);
        if (apply->parsed()) return cmd_apply(apply_path, apply_index, apply_out, policy);
        if (run->parsed()) return cmd_run(run_path, policy, run_max_steps, run_trace, run_dot_dir);
        if (dot->parsed()) return cmd_dot(dot_path, dot_out);
        return kExitUsage;
    } catch (const std::exception& e) {
        print_error(e.what());
        return kExitInternal;
    } catch (...) {
        print_error("unexpected failure");
        return kExitInternal;
    }
}
