#ifndef SHR_H
#define SHR_H

/*
 * C interface to the synchronized hyperedge replacement engine.
 *
 * Handles are opaque; every handle returned by this API must be released
 * with its matching _free function. Strings returned through `char**`
 * out-parameters are heap copies owned by the caller and released with
 * shr_text_free. All functions are safe to call with NULL handles and
 * report SHR_ERR_ARGUMENT.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum shr_status {
    SHR_OK = 0,
    SHR_ERR_ARGUMENT = 1,  /* NULL handle, bad index, bad parameter */
    SHR_ERR_PARSE = 2,     /* specification text failed to parse/validate */
    SHR_ERR_INDEX = 3,     /* transition or step index out of range */
    SHR_ERR_ASSERTION = 4, /* scenario ran but an assertion failed */
    SHR_ERR_INTERNAL = 5,  /* invariant violation inside the engine */
} shr_status;

typedef enum shr_policy {
    SHR_POLICY_MILNER = 0,
    SHR_POLICY_BROADCAST = 1,
} shr_policy;

typedef struct shr_spec shr_spec;   /* parsed specification */
typedef struct shr_steps shr_steps; /* enumerated transitions of one graph */
typedef struct shr_run shr_run;     /* executed scenario */

const char* shr_version(void);

/* --- specifications ----------------------------------------------------- */

/* Parsing always yields a handle (carrying diagnostics on failure) unless
 * allocation itself fails. Returns SHR_OK or SHR_ERR_PARSE. */
shr_status shr_spec_parse(const char* text, shr_spec** out);
shr_status shr_spec_parse_file(const char* path, shr_spec** out);
void shr_spec_free(shr_spec* spec);

int shr_spec_ok(const shr_spec* spec);
size_t shr_spec_diagnostic_count(const shr_spec* spec);
shr_status shr_spec_diagnostic_at(const shr_spec* spec, size_t index, char** out);

/* Canonical source text round-trip. */
shr_status shr_spec_canonical(const shr_spec* spec, char** out);

/* DOT rendering of the spec's initial graph. */
shr_status shr_spec_graph_dot(const shr_spec* spec, char** out);

void shr_text_free(char* text);

/* --- stepping ----------------------------------------------------------- */

/* Enumerates the transitions of the spec's initial graph under the policy,
 * in the engine's deterministic order. */
shr_status shr_steps_enumerate(const shr_spec* spec, shr_policy policy, shr_steps** out);
size_t shr_steps_count(const shr_steps* steps);
shr_status shr_steps_describe(const shr_steps* steps, size_t index, char** out);

/* Applies one transition and hands back the successor specification (same
 * labels, productions and rules; rewritten graph; no scenario). */
shr_status shr_steps_apply(const shr_steps* steps, size_t index, shr_spec** out);
void shr_steps_free(shr_steps* steps);

/* --- scenario runs ------------------------------------------------------ */

/* Runs the spec's scenario (or rewrites to quiescence without one). The
 * run handle is produced even when an assertion fails; SHR_ERR_ASSERTION
 * signals the failure. */
shr_status shr_run_scenario(const shr_spec* spec, shr_policy policy, size_t max_steps,
                            shr_run** out);
size_t shr_run_step_count(const shr_run* run);

/* One JSON object per executed step. */
shr_status shr_run_trace_line(const shr_run* run, size_t index, char** out);

/* DOT of the graph after step `index`; index 0 with `initial` = 1 gives the
 * starting graph. */
shr_status shr_run_step_dot(const shr_run* run, size_t index, int initial, char** out);

int shr_run_passed(const shr_run* run);
shr_status shr_run_failure(const shr_run* run, char** out);
shr_status shr_run_final_canonical(const shr_run* run, char** out);
void shr_run_free(shr_run* run);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SHR_H */
