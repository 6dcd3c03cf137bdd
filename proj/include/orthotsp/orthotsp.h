/* C interface to the orthotsp toolkit.
 *
 * All functions return an orthotsp_status. On failure a message describing
 * the error is available from orthotsp_last_error() on the calling thread.
 * Strings handed out through char** parameters are owned by the caller and
 * released with orthotsp_string_free. City indices are 0-based. */
#ifndef ORTHOTSP_H
#define ORTHOTSP_H

#include <stddef.h>
#include <stdint.h>

#if defined(ORTHOTSP_BUILDING_LIBRARY)
#define ORTHOTSP_API __attribute__((visibility("default")))
#else
#define ORTHOTSP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum orthotsp_status {
  ORTHOTSP_OK = 0,
  ORTHOTSP_MALFORMED_INPUT = 1,
  ORTHOTSP_UNSUPPORTED_FORMAT = 2,
  ORTHOTSP_ASYMMETRIC_INPUT = 3,
  ORTHOTSP_DIMENSION_MISMATCH = 4,
  ORTHOTSP_TOO_LARGE = 5,
  ORTHOTSP_TOO_SMALL = 6,
  ORTHOTSP_INVALID_PARAMETER = 7,
  ORTHOTSP_NUMERICAL_FAILURE = 8,
  ORTHOTSP_NON_CONVERGENCE = 9,
  ORTHOTSP_STEP_TOO_LARGE = 10,
  ORTHOTSP_IO_ERROR = 11,
  ORTHOTSP_INTERNAL_ERROR = 12
} orthotsp_status;

/* Nonzero for statuses caused by bad input (files, parameters). */
ORTHOTSP_API int orthotsp_status_is_input_error(orthotsp_status s);
ORTHOTSP_API const char* orthotsp_status_name(orthotsp_status s);
ORTHOTSP_API const char* orthotsp_last_error(void);
ORTHOTSP_API void orthotsp_string_free(char* s);

/* ---- instances ---------------------------------------------------------- */

typedef struct orthotsp_instance orthotsp_instance;

ORTHOTSP_API orthotsp_status orthotsp_instance_load(const char* path, orthotsp_instance** out);
ORTHOTSP_API orthotsp_status orthotsp_instance_parse(const char* text, orthotsp_instance** out);
ORTHOTSP_API orthotsp_status orthotsp_instance_random(int n, uint64_t seed, orthotsp_instance** out);
ORTHOTSP_API void orthotsp_instance_free(orthotsp_instance* inst);
ORTHOTSP_API int orthotsp_instance_size(const orthotsp_instance* inst);
/* Valid while the instance lives. */
ORTHOTSP_API const char* orthotsp_instance_name(const orthotsp_instance* inst);
ORTHOTSP_API orthotsp_status orthotsp_distance(const orthotsp_instance* inst, int i, int j, double* out);
ORTHOTSP_API orthotsp_status orthotsp_tour_cost(const orthotsp_instance* inst, const int* order, int n,
                                                double* out);

/* ---- search ------------------------------------------------------------- */

typedef struct orthotsp_options {
  int m;                /* candidates per city, default 5 */
  double budget_factor; /* move budget = budget_factor * n, default 8 */
  uint64_t seed;        /* default 1 */
  int converge;         /* nonzero: no budget, best of several restarts */
  int restarts;         /* flow restarts, default 5 */
} orthotsp_options;

ORTHOTSP_API void orthotsp_options_default(orthotsp_options* o);

/* method: "alpha", "pnear", "flow-p" or "flow-h". Writes a JSON summary. */
ORTHOTSP_API orthotsp_status orthotsp_solve(const orthotsp_instance* inst, const char* method,
                                            const orthotsp_options* o, char** json_out);

/* method: "alpha", "pnear" or "distance". For "pnear", lambda < 0 selects the
 * homotopy value automatically. Writes the candidate text format. */
ORTHOTSP_API orthotsp_status orthotsp_candidates(const orthotsp_instance* inst, const char* method, int m,
                                                 double lambda, char** text_out);

/* variant: "p", "h" or "p-constrained". Writes every restart and the best one
 * as JSON. */
ORTHOTSP_API orthotsp_status orthotsp_flow(const orthotsp_instance* inst, const char* variant,
                                           const orthotsp_options* o, char** json_out);

/* ---- comparison reports ------------------------------------------------- */

typedef struct orthotsp_report orthotsp_report;

ORTHOTSP_API orthotsp_status orthotsp_report_new(const orthotsp_options* o, orthotsp_report** out);
ORTHOTSP_API void orthotsp_report_free(orthotsp_report* r);
/* Appends one α-nearness versus P-nearness row. */
ORTHOTSP_API orthotsp_status orthotsp_report_compare(orthotsp_report* r, const orthotsp_instance* inst);
ORTHOTSP_API orthotsp_status orthotsp_random_batch(int count, int n, uint64_t base_seed,
                                                   const orthotsp_options* o, orthotsp_report** out);
ORTHOTSP_API int orthotsp_report_rows(const orthotsp_report* r);
ORTHOTSP_API int orthotsp_report_wins(const orthotsp_report* r);
/* format: "csv" or "json". */
ORTHOTSP_API orthotsp_status orthotsp_report_export(const orthotsp_report* r, const char* format,
                                                    char** text_out);

#ifdef __cplusplus
}
#endif

#endif
