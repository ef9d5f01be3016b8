/* weaktraj C API: weak-measurement trajectory toolkit behind a stable
 * shared-library boundary. All functions return weaktraj_status; on any
 * non-OK status weaktraj_last_error() carries a message for the calling
 * thread. Handles are opaque and freed with their matching _free call. */
#ifndef WEAKTRAJ_H
#define WEAKTRAJ_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct weaktraj_config weaktraj_config;

/* Status values double as process exit codes in the CLI. */
typedef enum weaktraj_status {
  WEAKTRAJ_OK = 0,
  WEAKTRAJ_E_VALIDATION = 2,
  WEAKTRAJ_E_DATA = 3,
  WEAKTRAJ_E_NUMERIC = 4,
  WEAKTRAJ_E_IO = 5
} weaktraj_status;

const char* weaktraj_version(void);

/* Message of the most recent failure on this thread; empty string if none. */
const char* weaktraj_last_error(void);

/* --- configuration ------------------------------------------------------- */

/* The toolkit's reference two-slit dataset configuration. */
weaktraj_status weaktraj_config_create_standard(weaktraj_config** out);
/* Broad-separation demo defaults (many fine fringes). */
weaktraj_status weaktraj_config_create_default(weaktraj_config** out);
weaktraj_status weaktraj_config_load(const char* path, weaktraj_config** out);
weaktraj_status weaktraj_config_parse(const char* json_text, weaktraj_config** out);
void weaktraj_config_free(weaktraj_config* cfg);

weaktraj_status weaktraj_config_validate(const weaktraj_config* cfg);
/* mode_spec: "corrected", "legacy", or "custom:key=value,...". */
weaktraj_status weaktraj_config_set_mode(weaktraj_config* cfg, const char* mode_spec);
weaktraj_status weaktraj_config_set_seed(weaktraj_config* cfg, unsigned long long seed);
weaktraj_status weaktraj_config_set_jobs(weaktraj_config* cfg, int jobs);
weaktraj_status weaktraj_config_set_output_dir(weaktraj_config* cfg, const char* dir);

/* Dataset-identity hash (16 hex chars + NUL); buf_len must be >= 17. */
weaktraj_status weaktraj_config_hash(const weaktraj_config* cfg, char* buf, size_t buf_len);
/* Canonical JSON; free with weaktraj_string_free. */
weaktraj_status weaktraj_config_to_json(const weaktraj_config* cfg, char** out_json);
const char* weaktraj_config_output_dir(const weaktraj_config* cfg);

void weaktraj_string_free(char* s);

/* --- pipeline stages ------------------------------------------------------ */

/* out_dir NULL falls back to the config's output_dir. */
weaktraj_status weaktraj_synthesize(const weaktraj_config* cfg, const char* out_dir);

weaktraj_status weaktraj_reconstruct(const weaktraj_config* cfg, const char* frames_dir,
                                     const char* out_dir, int force);

/* method: "cdf", "phase", or "cvt". */
weaktraj_status weaktraj_bohm(const weaktraj_config* cfg, const char* method,
                              const char* out_dir);

/* congregation_method: "ks" (NULL defaults to it) or "l1". */
weaktraj_status weaktraj_compare(const char* ensemble_a_csv, const char* ensemble_b_csv,
                                 const char* density_csv, const char* out_dir,
                                 const char* congregation_method, int force);

/* Formatted summary of report JSON files; free with weaktraj_string_free. */
weaktraj_status weaktraj_report_summary(const char* const* report_paths, size_t n_reports,
                                        char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* WEAKTRAJ_H */
