#ifndef POSETS_H
#define POSETS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  POSETS_STATUS_OK = 0,
  POSETS_STATUS_NULL_POINTER = 1,
  POSETS_STATUS_INVALID_UTF8 = 2,
  POSETS_STATUS_PARSE = 3,
  POSETS_STATUS_SCHEMA = 4,
  POSETS_STATUS_NOT_A_PARTIAL_ORDER = 5,
  POSETS_STATUS_NOT_IN_CARRIER = 6,
  POSETS_STATUS_PRECONDITION = 7,
  POSETS_STATUS_CAPPED = 8,
  POSETS_STATUS_OVERFLOW = 9,
  POSETS_STATUS_BUFFER_TOO_SMALL = 10,
  POSETS_STATUS_INTERNAL = 11,
} PosetsStatus;

/**
 * Opaque handle to a validated poset.
 */
typedef struct PosetsPoset PosetsPoset;

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *posets_last_error_message(void);

/**
 * Parse a poset document (`{"elements": [...], "leq": [...]}`).
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
PosetsStatus posets_poset_from_json(const char *json, PosetsPoset **out);

/**
 * # Safety
 * `p` must come from [`posets_poset_from_json`] and not be freed twice.
 */
void posets_poset_free(PosetsPoset *p);

/**
 * Number of elements, 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t posets_poset_len(const PosetsPoset *p);

/**
 * Whether `a ⪯ b`, by element id.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
PosetsStatus posets_poset_leq(const PosetsPoset *p, uint64_t a, uint64_t b, bool *out);

/**
 * Poset as a closed JSON document.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
PosetsStatus posets_poset_to_json(const PosetsPoset *p, char **out);

/**
 * Number of initial intervals. `POSETS_STATUS_OVERFLOW` if it does not fit.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
PosetsStatus posets_count_intervals(const PosetsPoset *p, uint64_t *out);

/**
 * Ids of a maximum strong antichain. `*len` is always set to its size; the
 * ids are written only when `cap` is large enough, otherwise the call
 * returns `POSETS_STATUS_BUFFER_TOO_SMALL`.
 *
 * # Safety
 * `ids` must have room for `cap` values (it may be null when `cap` is 0).
 */
PosetsStatus posets_max_strong_antichain(const PosetsPoset *p,
                                         uint64_t *ids,
                                         size_t cap,
                                         size_t *len);

/**
 * Ideal cover indexed by the maximal elements, as `{"parts", "witness"}`.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
PosetsStatus posets_decompose_json(const PosetsPoset *p, char **out);

/**
 * Initial interval containing `a` and disjoint from `b`, as a JSON id list.
 *
 * # Safety
 * `a` and `b` must point at `na` and `nb` ids.
 */
PosetsStatus posets_separate_json(const PosetsPoset *p,
                                  const uint64_t *a,
                                  size_t na,
                                  const uint64_t *b,
                                  size_t nb,
                                  char **out);

/**
 * Build the named gadget from finite tables of `f` and `g`, run its
 * algorithm and return `{"poset": ..., "decoded": [...]}`.
 *
 * # Safety
 * `family` must be a nul-terminated string, `f` and `g` must point at
 * `nf` and `ng` values.
 */
PosetsStatus posets_gadget_json(const char *family,
                                const uint64_t *f,
                                size_t nf,
                                const uint64_t *g,
                                size_t ng,
                                size_t horizon,
                                char **out);

/**
 * Run the priority construction for `stages` stages against an evaluator
 * pool document and return the transcript.
 *
 * # Safety
 * `pool` must be a nul-terminated string and `out` a valid pointer.
 */
PosetsStatus posets_priority_run_json(const char *pool, size_t horizon, size_t stages, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void posets_string_free(char *s);

#endif  /* POSETS_H */
