/* recirc - material circularity simulation and derivative-free control.
 *
 * C interface of the shared library. All functions return RECIRC_OK (0) on
 * success or a nonzero error code; recirc_last_error() describes the most
 * recent failure on the calling thread. Objects are opaque handles released
 * with their matching *_destroy function. Strings returned through char**
 * are heap-allocated and released with recirc_string_free().
 */
#ifndef RECIRC_H
#define RECIRC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RECIRC_API __declspec(dllexport)
#else
#define RECIRC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
    RECIRC_OK = 0,
    RECIRC_ERR_INVALID_ARGUMENT = 1, /* bad parameter, bad config value, contract misuse */
    RECIRC_ERR_PARSE = 2,            /* malformed text input */
    RECIRC_ERR_NUMERIC = 3,          /* divergence or other numerical failure */
    RECIRC_ERR_IO = 4,               /* file could not be read or written */
    RECIRC_ERR_INTERNAL = 5
};

/* Message for the last failure on this thread; valid until the next call. */
RECIRC_API const char* recirc_last_error(void);
RECIRC_API const char* recirc_version(void);
RECIRC_API void recirc_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Environments                                                       */
/* ------------------------------------------------------------------ */

typedef struct recirc_env recirc_env;

typedef struct recirc_step_info {
    double reward;
    int terminated;      /* environment-level end */
    int truncated;       /* horizon reached */
    int action_clipped;  /* the applied action was clipped into the box */
} recirc_step_info;

/* JSON array of {name, state_dim, action_dim, compartment, role}. */
RECIRC_API int recirc_env_catalog_json(char** out_json);

/* params_json: environment parameter object ("{}" or NULL for defaults);
 * unknown keys are rejected. base_seed drives unseeded resets. */
RECIRC_API int recirc_env_create(const char* name, const char* params_json, uint64_t base_seed,
                                 recirc_env** out_env);
RECIRC_API void recirc_env_destroy(recirc_env* env);

RECIRC_API int recirc_env_obs_dim(const recirc_env* env, size_t* out_dim);
RECIRC_API int recirc_env_action_dim(const recirc_env* env, size_t* out_dim);
RECIRC_API int recirc_env_max_episode_steps(const recirc_env* env, int* out_steps);
RECIRC_API int recirc_env_step_dt(const recirc_env* env, double* out_dt);
RECIRC_API int recirc_env_observation_space(const recirc_env* env, double* low, double* high);
RECIRC_API int recirc_env_action_space(const recirc_env* env, double* low, double* high);
/* Comma-separated state component names, e.g. "s_n,q,x_b". */
RECIRC_API int recirc_env_state_names(const recirc_env* env, char** out_csv);

/* seed may be NULL to continue the environment's own deterministic stream.
 * obs_out must hold obs_dim doubles. */
RECIRC_API int recirc_env_reset(recirc_env* env, const uint64_t* seed, double* obs_out);
RECIRC_API int recirc_env_step(recirc_env* env, const double* action, size_t action_len,
                               double* obs_out, recirc_step_info* out_info);
/* Raw state vector (obs_dim doubles) after the most recent reset/step. */
RECIRC_API int recirc_env_state(const recirc_env* env, double* state_out);
/* Info map of the most recent step as JSON: raw state, clipping flag and
 * environment-specific extras (e.g. m_dot_23 for the microalgae models). */
RECIRC_API int recirc_env_last_info_json(const recirc_env* env, char** out_json);

/* ------------------------------------------------------------------ */
/* Policies                                                           */
/* ------------------------------------------------------------------ */

typedef struct recirc_policy recirc_policy;

RECIRC_API int recirc_policy_zero(size_t action_dim, size_t obs_dim, recirc_policy** out);
RECIRC_API int recirc_policy_load(const char* text, recirc_policy** out);
RECIRC_API int recirc_policy_load_file(const char* path, recirc_policy** out);
RECIRC_API int recirc_policy_save(const recirc_policy* policy, char** out_text);
RECIRC_API int recirc_policy_save_file(const recirc_policy* policy, const char* path);
RECIRC_API int recirc_policy_dims(const recirc_policy* policy, size_t* action_dim,
                                  size_t* obs_dim);
/* Deterministic action for an observation (not clipped; environments clip). */
RECIRC_API int recirc_policy_act(const recirc_policy* policy, const double* obs, size_t obs_len,
                                 double* action_out, size_t action_len);
RECIRC_API void recirc_policy_destroy(recirc_policy* policy);

/* ------------------------------------------------------------------ */
/* Training and evaluation                                            */
/* ------------------------------------------------------------------ */

typedef struct recirc_train_result recirc_train_result;

typedef struct recirc_eval_report {
    double start_return; /* mean return before training */
    double end_return;   /* mean return of the returned policy */
    double zeta;         /* end_return - start_return */
    int n_eval_episodes;
    double wall_time_seconds;
} recirc_eval_report;

/* trainer_json selects and configures the algorithm:
 *   {"algorithm":"ars","step_size":0.02,"n_directions":8,"top_directions":4,
 *    "noise_std":0.03,"iterations":300,"eval_every":10,"seed":0,
 *    "eval_episodes":100}
 *   {"algorithm":"cem","population":32,"elite_frac":0.25,"init_std":1.0,
 *    "iterations":100,"eval_every":10,"seed":0,"eval_episodes":100}
 * Results are bitwise independent of n_workers. */
RECIRC_API int recirc_train(const char* env_name, const char* env_params_json,
                            const char* trainer_json, int n_workers,
                            recirc_train_result** out);
RECIRC_API int recirc_train_result_history_size(const recirc_train_result* result, size_t* out);
RECIRC_API int recirc_train_result_history_row(const recirc_train_result* result, size_t index,
                                               int* iteration, double* mean_return,
                                               double* eval_return, int* has_eval);
RECIRC_API int recirc_train_result_report(const recirc_train_result* result,
                                          recirc_eval_report* out);
RECIRC_API int recirc_train_result_policy(const recirc_train_result* result,
                                          recirc_policy** out);
RECIRC_API int recirc_train_result_diverged(const recirc_train_result* result, int* diverged,
                                            int* at_iteration);
RECIRC_API void recirc_train_result_destroy(recirc_train_result* result);

RECIRC_API int recirc_evaluate(const char* env_name, const char* env_params_json,
                               const recirc_policy* policy, size_t n_episodes, uint64_t seed,
                               double* out_mean_return);
RECIRC_API int recirc_zeta(double start_return, double end_return, double* out);

/* ------------------------------------------------------------------ */
/* Material networks and circularity                                  */
/* ------------------------------------------------------------------ */

typedef struct recirc_network recirc_network;

RECIRC_API int recirc_network_parse(const char* text, recirc_network** out);
RECIRC_API int recirc_network_load_file(const char* path, recirc_network** out);
/* Canonical built-ins: "solid-cycle" and "netzero". */
RECIRC_API int recirc_network_builtin(const char* which, recirc_network** out);
RECIRC_API int recirc_network_counts(const recirc_network* net, size_t* nodes, size_t* arcs,
                                     size_t* total);
/* ok=1 when all structural invariants hold; the report lists violations and
 * warnings, one per line ("ok" when clean). */
RECIRC_API int recirc_network_validate(const recirc_network* net, int* ok, char** out_report);
/* {"nodes":[...],"edges":[{"from":..,"to":..,"key":..}]}; fails on invalid nets. */
RECIRC_API int recirc_network_digraph_json(const recirc_network* net, char** out_json);
RECIRC_API int recirc_network_serialize(const recirc_network* net, char** out_text);
RECIRC_API void recirc_network_destroy(recirc_network* net);

RECIRC_API int recirc_mass_split(double mass, double success_pct, double* recycled,
                                 double* unsorted);

typedef struct recirc_solid_scenario {
    double total_mass;                  /* kg extracted */
    double sorting_success_pct;         /* [0, 100] */
    double sorting_duration;            /* s */
    double extraction_exit_time;        /* s */
    double first_use_duration;          /* s */
    double transport_unsorted_duration; /* s, sorter -> incinerator direct */
    double second_life_duration;        /* s, must exceed the direct transport */
} recirc_solid_scenario;

RECIRC_API int recirc_lambda_solid(const recirc_solid_scenario* scenario, const double* times,
                                   size_t n_times, double* lambda_out);
RECIRC_API int recirc_solid_event_times(const recirc_solid_scenario* scenario,
                                        double* sorter_exit, double* unsorted_arrival,
                                        double* recycled_arrival);
/* The scenario timeline as an event log against the solid-cycle network. */
RECIRC_API int recirc_solid_scenario_events(const recirc_solid_scenario* scenario,
                                            char** out_event_log);

/* events_text: "time mass from_k to_k" lines. flows_text (optional, may be
 * NULL): "flow from_k to_k" headers followed by "time rate" samples. */
RECIRC_API int recirc_lambda_ledger(const recirc_network* net, const char* events_text,
                                    const char* flows_text, double delta, const double* times,
                                    size_t n_times, double* lambda_out);

/* Parsed contents of a flow file, for callers that need the raw series. */
typedef struct recirc_flow_set recirc_flow_set;

RECIRC_API int recirc_flows_parse(const char* text, recirc_flow_set** out);
RECIRC_API int recirc_flow_set_size(const recirc_flow_set* flows, size_t* out);
RECIRC_API int recirc_flow_endpoints(const recirc_flow_set* flows, size_t index, int* from_k,
                                     int* to_k);
RECIRC_API int recirc_flow_samples_size(const recirc_flow_set* flows, size_t index, size_t* out);
RECIRC_API int recirc_flow_samples(const recirc_flow_set* flows, size_t index, double* times,
                                   double* rates);
RECIRC_API void recirc_flow_set_destroy(recirc_flow_set* flows);

/* lambda = -delta * (emitter(t) - remover(t)), both series interpolated
 * piecewise-linearly and zero outside their sampled span. */
RECIRC_API int recirc_lambda_netzero(const double* emitter_times, const double* emitter_rates,
                                     size_t emitter_n, const double* remover_times,
                                     const double* remover_rates, size_t remover_n, double delta,
                                     const double* times, size_t n_times, double* lambda_out);

/* ------------------------------------------------------------------ */
/* Integrator verification                                            */
/* ------------------------------------------------------------------ */

/* Simulates the named environment twice over the horizon - with its
 * configured fixed-step integrator and with an adaptive reference at tight
 * tolerance - holding constant_action each control step, and reports the
 * per-state maximum relative deviation as JSON:
 *   {"pass":...,"reference_failed":...,"rel_tol":...,
 *    "max_rel_deviation":...,"steps":...,
 *    "per_state":[{"name":...,"max_rel":...,"at_time":...,"scale":...}]}
 */
RECIRC_API int recirc_verify_env(const char* env_name, const char* env_params_json,
                                 const double* constant_action, size_t action_len,
                                 double horizon, double rel_tol, uint64_t seed,
                                 char** out_report_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RECIRC_H */
