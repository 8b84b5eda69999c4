#ifndef FDSAT_H
#define FDSAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The first four match the CLI exit codes.
 */
enum FdsatStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  FDSAT_STATUS_OK = 0,
  /**
   * Validation, parse, range or domain error.
   */
  FDSAT_STATUS_INVALID = 1,
  FDSAT_STATUS_IO = 2,
  FDSAT_STATUS_NO_COMMON_VISIBILITY = 3,
  FDSAT_STATUS_NULL_ARGUMENT = 4,
  FDSAT_STATUS_INVALID_UTF8 = 5,
  FDSAT_STATUS_PANIC = 6,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum FdsatStatus FdsatStatus;
#else
typedef int32_t FdsatStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * The result of [`fdsat_assess`], with the scenario it was computed from.
 */
typedef struct FdsatAssessment FdsatAssessment;

/**
 * A validated scenario.
 */
typedef struct FdsatScenario FdsatScenario;

/**
 * Headline numbers of an assessment.
 */
typedef struct FdsatSummary {
  double se_fdd_bps_hz;
  double se_fd_bps_hz;
  double gain_percent;
  double residual_si_dbw;
  double stability_margin_db;
  /**
   * NaN when FD never catches up with FDD.
   */
  double sic_breakeven_db;
  bool stability_warning;
} FdsatSummary;

/**
 * One row of a SIC sweep.
 */
typedef struct FdsatSweepPoint {
  double sic_db;
  double se_fdd_bps_hz;
  double se_fd_bps_hz;
  double gain_percent;
  double residual_si_dbw;
} FdsatSweepPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and validates scenario TOML.
 *
 * # Safety
 * `toml` must be a NUL-terminated string; `out` must be writable.
 */
FdsatStatus fdsat_scenario_from_toml(const char *toml, struct FdsatScenario **out);

/**
 * Loads a scenario file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
FdsatStatus fdsat_scenario_from_file(const char *path, struct FdsatScenario **out);

/**
 * Built-in reference scenario for `use_case` (for example `"FU-UD"`).
 *
 * # Safety
 * `use_case` must be a NUL-terminated string; `out` must be writable.
 */
FdsatStatus fdsat_scenario_reference(const char *use_case, struct FdsatScenario **out);

/**
 * # Safety
 * `scenario` must be null or a handle from this library not yet freed.
 */
void fdsat_scenario_free(struct FdsatScenario *scenario);

/**
 * Replaces the scenario SIC depth, dB.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
FdsatStatus fdsat_scenario_set_sic(struct FdsatScenario *scenario, double sic_db);

/**
 * Scenario as TOML text.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be writable.
 */
FdsatStatus fdsat_scenario_to_toml(const struct FdsatScenario *scenario, char **out);

/**
 * # Safety
 * `scenario` must be a live handle; `out` must be writable.
 */
FdsatStatus fdsat_assess(const struct FdsatScenario *scenario, struct FdsatAssessment **out);

/**
 * # Safety
 * `assessment` must be null or a handle from this library not yet freed.
 */
void fdsat_assessment_free(struct FdsatAssessment *assessment);

/**
 * # Safety
 * `assessment` must be a live handle; `out` must be writable.
 */
FdsatStatus fdsat_assessment_summary(const struct FdsatAssessment *assessment,
                                     struct FdsatSummary *out);

/**
 * The same JSON document as `fdsat assess --format json`.
 *
 * # Safety
 * `assessment` must be a live handle; `out` must be writable.
 */
FdsatStatus fdsat_assessment_to_json(const struct FdsatAssessment *assessment, char **out);

/**
 * Evaluates `count` SIC values into `out`, which must hold `count` points.
 *
 * # Safety
 * `sic_values` and `out` must each point to `count` elements.
 */
FdsatStatus fdsat_sweep_sic(const struct FdsatScenario *scenario,
                            const double *sic_values,
                            size_t count,
                            struct FdsatSweepPoint *out);

/**
 * The use-case catalog, as printed by `fdsat catalog --json`.
 *
 * # Safety
 * `out` must be writable.
 */
FdsatStatus fdsat_catalog_json(char **out);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *fdsat_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void fdsat_string_free(char *s);

/**
 * Library version, a static NUL-terminated string.
 */
const char *fdsat_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FDSAT_H */
