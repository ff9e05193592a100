/* C interface to the symdesign spectral-gap toolkit. Generated by cbindgen; do not edit. */

#ifndef SYMDESIGN_H
#define SYMDESIGN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes of every fallible call.
 */
typedef enum SdStatus {
  SD_STATUS_OK = 0,
  SD_STATUS_NULL_POINTER = 1,
  SD_STATUS_INVALID_ARGUMENT = 2,
  SD_STATUS_MALFORMED = 3,
  SD_STATUS_MISMATCH = 4,
  SD_STATUS_NOT_GENERATING = 5,
  SD_STATUS_UNSUPPORTED = 6,
  SD_STATUS_BUDGET = 7,
  SD_STATUS_NOT_STOCHASTIC = 8,
  SD_STATUS_NO_GAP = 9,
  SD_STATUS_INTERNAL = 10,
  SD_STATUS_IO = 11,
  SD_STATUS_PANIC = 12,
} SdStatus;

/*
 Symmetry group selector.
 */
typedef enum SdSymmetry {
  /*
   Qubits with conserved Hamming weight.
   */
  SD_SYMMETRY_U1 = 0,
  /*
   Qudits with global SU(d) symmetry (`d` passed separately).
   */
  SD_SYMMETRY_SUD = 1,
} SdSymmetry;

/*
 Named generating sets.
 */
typedef enum SdGraph {
  SD_GRAPH_CHAIN = 0,
  SD_GRAPH_STAR = 1,
  SD_GRAPH_COMPLETE = 2,
} SdGraph;

/*
 Opaque model handle: symmetry, size, generating set and run settings.
 */
typedef struct SdModel SdModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Creates a model for a named generating set. `d` is ignored for U(1).

 # Safety
 `out` must be a valid, writable pointer.
 */
enum SdStatus sd_model_new(enum SdSymmetry sym,
                           uintptr_t d,
                           uintptr_t n,
                           enum SdGraph graph_kind,
                           struct SdModel **out);

/*
 Creates a model for a custom generating set given as `n_edges` pairs
 `(edges[2k], edges[2k+1])` of 1-based sites.

 # Safety
 `edges` must point to `2 * n_edges` readable values; `out` must be writable.
 */
enum SdStatus sd_model_new_custom(enum SdSymmetry sym,
                                  uintptr_t d,
                                  uintptr_t n,
                                  const uintptr_t *edges,
                                  uintptr_t n_edges,
                                  struct SdModel **out);

/*
 Releases a model. Passing null is a no-op.

 # Safety
 `model` must be null or a handle from this library not yet freed.
 */
void sd_model_free(struct SdModel *model);

/*
 Sets the accuracy `ε ∈ (0, 1)` used for depth computations.

 # Safety
 `model` must be a live handle.
 */
enum SdStatus sd_model_set_epsilon(struct SdModel *model, double epsilon);

/*
 Number of symmetry sectors.

 # Safety
 `model` must be a live handle and `out` writable.
 */
enum SdStatus sd_model_num_sectors(const struct SdModel *model, uintptr_t *out);

/*
 Dimension of sector `index`.

 # Safety
 `model` must be a live handle and `out` writable.
 */
enum SdStatus sd_model_sector_dim(const struct SdModel *model, uintptr_t index, uintptr_t *out);

/*
 Runs the full gap pipeline. Writes the global gap of the second-moment
 operator to `out_gap`, its depth to `out_depth` (either may be null), and
 whether every comparison check passed to `out_pass` (may be null).

 # Safety
 `model` must be a live handle; non-null outputs must be writable.
 */
enum SdStatus sd_global_gap(const struct SdModel *model,
                            double *out_gap,
                            uint64_t *out_depth,
                            bool *out_pass);

/*
 Runs the full gap pipeline and returns the JSON report. Release the
 string with [`sd_string_free`].

 # Safety
 `model` must be a live handle and `out` writable.
 */
enum SdStatus sd_report_json(const struct SdModel *model, char **out);

/*
 Releases a string returned by this library. Passing null is a no-op.

 # Safety
 `s` must be null or a string from this library not yet freed.
 */
void sd_string_free(char *s);

/*
 Depth `⌈(2kn ln d + ln(1/ε))/Δ⌉` for a given gap.

 # Safety
 `out` must be writable.
 */
enum SdStatus sd_convergence_depth(double gap,
                                   uintptr_t k,
                                   uintptr_t n,
                                   uintptr_t d,
                                   double epsilon,
                                   uint64_t *out);

/*
 Closed-form top adjacency eigenvalues and gap of a named Cayley graph of `S_n`.

 # Safety
 Non-null outputs must be writable.
 */
enum SdStatus sd_cayley_closed_form(enum SdGraph graph_kind,
                                    uintptr_t n,
                                    double *out_lambda1,
                                    double *out_lambda2,
                                    double *out_gap);

/*
 Message of the most recent failure on this thread, or null after a
 success. The pointer stays valid until the next call on this thread.
 */
const char *sd_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *sd_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMDESIGN_H */
