#ifndef RICCI_RICCI_H
#define RICCI_RICCI_H

#include <stddef.h>

#if defined(RICCI_BUILDING_LIBRARY)
#define RICCI_API __attribute__((visibility("default")))
#else
#define RICCI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ricci_status {
  RICCI_OK = 0,
  RICCI_INVALID_ARGUMENT,
  RICCI_INVALID_CHAIN,
  RICCI_NON_UNIQUE_STATIONARY,
  RICCI_ZERO_MASS,
  RICCI_NOT_GEODESIC,
  RICCI_NON_POSITIVE_KAPPA,
  RICCI_NO_POSITIVE_KAPPA,
  RICCI_UNBOUNDED,
  RICCI_TOO_LARGE,
  RICCI_INCOMPLETE_PAIR_SET,
  RICCI_INVALID_V,
  RICCI_INVALID_S,
  RICCI_ZERO_GRANULARITY,
  RICCI_NOT_REVERSIBLE,
  RICCI_IO,
  RICCI_INTERNAL
} ricci_status;

typedef struct ricci_chain ricci_chain;
typedef struct ricci_report ricci_report;

RICCI_API const char* ricci_status_string(ricci_status status);

/* Message of the last failed call on this thread; empty after success. */
RICCI_API const char* ricci_last_error(void);

/* ---- chains ---------------------------------------------------------- */

/* keys/values may be NULL when count == 0; missing parameters take their
   defaults (see ricci_model_list). */
RICCI_API ricci_status ricci_chain_from_model(const char* name, const char* const* keys, const double* values,
                                              size_t count, ricci_chain** out);
RICCI_API ricci_status ricci_chain_from_json_file(const char* path, ricci_chain** out);
RICCI_API ricci_status ricci_chain_from_json_string(const char* json, ricci_chain** out);
RICCI_API void ricci_chain_free(ricci_chain* chain);

RICCI_API size_t ricci_chain_size(const ricci_chain* chain);
/* Row-major n*n transition matrix. */
RICCI_API ricci_status ricci_chain_transition(const ricci_chain* chain, double* out, size_t len);
RICCI_API ricci_status ricci_chain_stationary(const ricci_chain* chain, double* out, size_t len);
RICCI_API ricci_status ricci_chain_reversible(const ricci_chain* chain, int* out);

/* kappa_0..kappa_K into out[0..K]; len must be at least K + 1. */
RICCI_API ricci_status ricci_curvature_profile(const ricci_chain* chain, unsigned K, double* out, size_t len);
RICCI_API ricci_status ricci_w1(const ricci_chain* chain, const double* mu, const double* nu, size_t len,
                                double* out);

/* ---- reports --------------------------------------------------------- */

/* options_json may be NULL for defaults. out_dir may be NULL to skip
   writing files. */
RICCI_API ricci_status ricci_analyze(const ricci_chain* chain, const char* options_json, const char* out_dir,
                                     ricci_report** out);
RICCI_API ricci_status ricci_mcmc(const ricci_chain* chain, const char* options_json, const char* out_dir,
                                  ricci_report** out);
RICCI_API ricci_status ricci_cube_figure(const char* options_json, const char* out_dir, ricci_report** out);
RICCI_API ricci_status ricci_certify_all(const char* out_dir, ricci_report** out);
/* format is "json" or "csv". */
RICCI_API ricci_status ricci_model_list(const char* format, ricci_report** out);

/* Summary text; valid until the report is freed. */
RICCI_API const char* ricci_report_json(const ricci_report* report);
RICCI_API int ricci_report_passed(const ricci_report* report);
RICCI_API void ricci_report_free(ricci_report* report);

#ifdef __cplusplus
}
#endif

#endif
