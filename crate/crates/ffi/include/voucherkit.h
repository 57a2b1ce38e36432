#ifndef VOUCHERKIT_H
#define VOUCHERKIT_H

/* Generated by cbindgen from voucherkit-ffi; regenerate with `cargo build -p voucherkit-ffi`. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes for every fallible call.
typedef enum vk_status {
  VK_OK = 0,
  // A required pointer argument was null.
  VK_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  VK_UTF8 = 2,
  // Configuration could not be parsed or is inconsistent.
  VK_CONFIG = 3,
  // Input data failed validation.
  VK_VALIDATION = 4,
  // Numeric failure (singular matrix, undefined estimate).
  VK_NUMERIC = 5,
  // An index or dimension argument is out of range.
  VK_RANGE = 6,
  // The callee panicked; the handle state is unchanged.
  VK_INTERNAL = 7,
} vk_status;

// Which estimator a bootstrap call resamples.
typedef enum vk_metric {
  // Expenditure substitution rate.
  VK_METRIC_ES = 0,
  // Induced consumption rate.
  VK_METRIC_IC = 1,
} vk_metric;

// Survey dataset handle.
typedef struct vk_dataset vk_dataset;

// Sector table handle.
typedef struct vk_sector_table vk_sector_table;

// Voucher configuration handle.
typedef struct vk_voucher_config vk_voucher_config;

// A confidence region: percentile intervals for the bias-adjusted lower
// bound and the unadjusted upper bound, plus their hull.
typedef struct vk_region {
  double point;
  double lower_lo;
  double lower_hi;
  double upper_lo;
  double upper_hi;
  double combined_lo;
  double combined_hi;
} vk_region;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *vk_version(void);

// Copy the current thread's last error message into `buf` (truncated to
// `len − 1` bytes, always NUL-terminated when `len > 0`). Returns the full
// message length in bytes, excluding the NUL.
//
// # Safety
// `buf` must point to `len` writable bytes, or be null (the call then only
// reports the length).
size_t vk_last_error(char *buf, size_t len);

// Create the built-in voucher configuration.
//
// # Safety
// `out` must be a valid pointer.
enum vk_status vk_voucher_config_default(struct vk_voucher_config **out);

// Parse a voucher configuration from TOML text.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be a valid pointer.
enum vk_status vk_voucher_config_from_toml(const char *text, struct vk_voucher_config **out);

// Release a configuration handle (null is a no-op).
//
// # Safety
// `config` must have been returned by a `vk_voucher_config_*` constructor
// and not freed before.
void vk_voucher_config_free(struct vk_voucher_config *config);

// Ingest a survey from CSV text (same schema as the CLI file format).
//
// # Safety
// `text` must be NUL-terminated; `config` a live configuration handle;
// `out` a valid pointer.
enum vk_status vk_dataset_from_csv(const char *text,
                                   const struct vk_voucher_config *config,
                                   struct vk_dataset **out);

// Number of records in the dataset; 0 when the handle is null.
//
// # Safety
// `dataset` must be a live dataset handle or null.
size_t vk_dataset_len(const struct vk_dataset *dataset);

// Release a dataset handle (null is a no-op).
//
// # Safety
// `dataset` must have been returned by [`vk_dataset_from_csv`] and not
// freed before.
void vk_dataset_free(struct vk_dataset *dataset);

// Overall expenditure substitution rate of one voucher type
// (original-wave records).
//
// # Safety
// `dataset` and `config` must be live handles; `value` must be valid;
// `n` may be null.
enum vk_status vk_substitution_rate(const struct vk_dataset *dataset,
                                    const struct vk_voucher_config *config,
                                    uint32_t voucher,
                                    double *value,
                                    size_t *n);

// Overall induced consumption rate of one voucher type (original-wave
// records).
//
// # Safety
// Same contract as [`vk_substitution_rate`].
enum vk_status vk_induced_rate(const struct vk_dataset *dataset,
                               const struct vk_voucher_config *config,
                               uint32_t voucher,
                               double *value,
                               size_t *n);

// Stratified-bootstrap confidence region for the whole sample of one
// voucher type. `strata` is a comma-separated dimension list
// (`gender,residence,age` when null).
//
// # Safety
// `dataset` and `config` must be live handles; `strata` NUL-terminated or
// null; `out` must be valid.
enum vk_status vk_bootstrap_overall(const struct vk_dataset *dataset,
                                    const struct vk_voucher_config *config,
                                    uint32_t voucher,
                                    enum vk_metric metric,
                                    double alpha,
                                    uint32_t replications,
                                    uint64_t seed,
                                    const char *strata,
                                    struct vk_region *out);

// Create the built-in 19-sector table.
//
// # Safety
// `out` must be a valid pointer.
enum vk_status vk_sector_table_default(struct vk_sector_table **out);

// Load a sector table from CSV text (same format as the CLI file).
//
// # Safety
// `text` must be NUL-terminated; `out` must be valid.
enum vk_status vk_sector_table_from_csv(const char *text, struct vk_sector_table **out);

// Number of sectors; 0 when the handle is null.
//
// # Safety
// `table` must be a live table handle or null.
size_t vk_sector_table_dim(const struct vk_sector_table *table);

// Release a sector-table handle (null is a no-op).
//
// # Safety
// `table` must have been returned by a `vk_sector_table_*` constructor and
// not freed before.
void vk_sector_table_free(struct vk_sector_table *table);

// Behaviorally adjusted final demand: `amounts[k] × (1 − es[k]) × (1 + ic[k])`
// mapped onto each voucher's target sector. All three arrays hold one entry
// per voucher in the fixed order; `demand_out` receives `dim` entries.
//
// # Safety
// `config` must be a live handle; `amounts`, `es`, `ic` must point to six
// readable doubles; `demand_out` to `dim` writable doubles.
enum vk_status vk_adjusted_demand(const struct vk_voucher_config *config,
                                  const double *amounts,
                                  const double *es,
                                  const double *ic,
                                  size_t dim,
                                  double *demand_out);

// Propagate a demand change: writes per-sector GDP contributions and the
// total and output multiplier (`total / original_total`).
//
// # Safety
// `table` must be a live handle; `demand` must point to `dim` readable
// doubles; `gdp_out` to `dim` writable doubles; `total`/`multiplier` may be
// null.
enum vk_status vk_impact(const struct vk_sector_table *table,
                         const double *demand,
                         size_t dim,
                         double original_total,
                         double *gdp_out,
                         double *total,
                         double *multiplier);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VOUCHERKIT_H */
