#ifndef IDPRIOR_H
#define IDPRIOR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by every API call. */
typedef enum idp_status {
  IDP_OK = 0,
  IDP_ERR_INVALID_ARGUMENT = 2,
  IDP_ERR_NUMERIC = 3,
  IDP_ERR_INTERNAL = 4
} idp_status;

/* Message describing the most recent failure on the calling thread.
 * Valid until the next failing call on the same thread. */
const char* idp_last_error(void);

/* Library version, static string. */
const char* idp_version(void);

/* ------------------------------------------------------------------ rng -- */

typedef struct idp_rng idp_rng;

idp_status idp_rng_create(uint64_t seed, uint64_t stream, idp_rng** out);
void idp_rng_destroy(idp_rng* rng);
idp_status idp_rng_uniform(idp_rng* rng, double* out);
idp_status idp_rng_normal(idp_rng* rng, double* out);

/* ------------------------------------------------------- shrinkage laws -- */

typedef struct idp_gpq idp_gpq;

/* Unit-variance G_{p,q} family; p > 0, q > 0. */
idp_status idp_gpq_create(double p, double q, idp_gpq** out);
void idp_gpq_destroy(idp_gpq* law);
idp_status idp_gpq_alpha(const idp_gpq* law, double* out);
idp_status idp_gpq_log_pdf(const idp_gpq* law, double t, double* out);
idp_status idp_gpq_cdf(const idp_gpq* law, double t, double* out);
/* E xi^s, zero for odd s by symmetry. */
idp_status idp_gpq_moment(const idp_gpq* law, unsigned s, double* out);
idp_status idp_gpq_sample(const idp_gpq* law, idp_rng* rng, size_t n, double* out);

/* ------------------------------------------------------------- pipeline -- */

/* Validate a JSON experiment config. On success writes a NUL-terminated
 * report into `report` (truncated to report_len). */
idp_status idp_validate(const char* config_path, char* report, size_t report_len);

/* Run the configured experiment. seed_override/out_override may be NULL;
 * reference_mode != 0 forces the deterministic single-threaded path. */
idp_status idp_run(const char* config_path, const uint64_t* seed_override,
                   const char* out_override, int reference_mode);

/* Write the synthetic truth/clean/data triple for the configured problem. */
idp_status idp_make_synthetic(const char* config_path, const uint64_t* seed_override,
                              const char* out_override);

#ifdef __cplusplus
}
#endif

#endif /* IDPRIOR_H */
