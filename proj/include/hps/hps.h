/* C interface to the HPS solver library.
 *
 * Handles are opaque; every fallible call returns a status code and, on
 * failure, writes a message into the caller's error buffer. The status
 * codes double as the CLI exit codes.
 */
#ifndef HPS_H
#define HPS_H

#include <stddef.h>

#if defined(_WIN32)
#define HPS_API __declspec(dllexport)
#else
#define HPS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum hps_status {
  HPS_OK = 0,
  HPS_ERR_CONFIG = 2,         /* bad config file, key or value */
  HPS_ERR_NUMERICAL = 3,      /* factorization/merge/solve failure */
  HPS_ERR_NONCONVERGENCE = 4, /* iteration cap reached; outputs still written */
  HPS_ERR_IO = 5              /* missing or unreadable file */
};

typedef struct hps_config hps_config;
typedef struct hps_report hps_report;

HPS_API const char* hps_version(void);

/* --- configuration ----------------------------------------------------- */

HPS_API hps_config* hps_config_create(void);
HPS_API void hps_config_free(hps_config* cfg);

/* Load "key = value" lines from a file, overwriting current values. */
HPS_API int hps_config_load(hps_config* cfg, const char* path, char* err,
                            size_t errlen);

/* Set a single key (same keys as the config file). */
HPS_API int hps_config_set(hps_config* cfg, const char* key, const char* value,
                           char* err, size_t errlen);

/* --- runs and reports --------------------------------------------------- */

/* Execute the configured solve. Writes mesh.txt, solution.txt, report.txt
 * and iterations.txt into the configured output directory. On HPS_OK or
 * HPS_ERR_NONCONVERGENCE, *out (if non-NULL) receives a report handle the
 * caller must free. */
HPS_API int hps_run(const hps_config* cfg, hps_report** out, char* err,
                    size_t errlen);

HPS_API hps_report* hps_report_create(void);
HPS_API void hps_report_free(hps_report* rep);

HPS_API int hps_report_load(hps_report* rep, const char* path, char* err,
                            size_t errlen);

/* Fetch a report field as a string. Keys: problem, nc, mode, formulation,
 * N_i, N_f, T_i, T_f, T_s, R, E_rel, converged. */
HPS_API int hps_report_get(const hps_report* rep, const char* key, char* value,
                           size_t valuelen);

/* Side-by-side delta table of two reports (same problem required). */
HPS_API int hps_compare(const hps_report* a, const hps_report* b, char* out,
                        size_t outlen, char* err, size_t errlen);

#ifdef __cplusplus
}
#endif

#endif /* HPS_H */
