#ifndef FORENSIC_DL_H
#define FORENSIC_DL_H

/* Generated by cbindgen from the forensic-dl-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FdlStatus {
  FDL_STATUS_OK = 0,
  FDL_STATUS_NULL_POINTER = 1,
  FDL_STATUS_INVALID_UTF8 = 2,
  /**
   * Syntax errors in a KB, concept or annotation stream.
   */
  FDL_STATUS_PARSE = 3,
  /**
   * Well-formed input the engine rejects (unsafe rule, unknown name, ...).
   */
  FDL_STATUS_INVALID = 4,
  FDL_STATUS_RESOURCE_LIMIT = 5,
  FDL_STATUS_PANIC = 6,
} FdlStatus;

/**
 * A materialized ABox together with the KB it was built from.
 */
typedef struct FdlClosure FdlClosure;

/**
 * A parsed knowledge base.
 */
typedef struct FdlKb FdlKb;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *fdl_last_error(void);

/**
 * Parses `.fkb` text into a new KB handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum FdlStatus fdl_kb_parse(const char *text, struct FdlKb **out);

/**
 * The built-in forensic ontology. Never returns null.
 */
struct FdlKb *fdl_kb_builtin(bool include_learned, bool include_invented);

/**
 * # Safety
 * `kb` must come from this library and not be freed twice. Null is ignored.
 */
void fdl_kb_free(struct FdlKb *kb);

/**
 * Writes the KB in `.fkb` syntax to `*out`.
 *
 * # Safety
 * `kb` must be a live handle and `out` a writable pointer.
 */
enum FdlStatus fdl_kb_serialize(const struct FdlKb *kb, char **out);

/**
 * # Safety
 * `s` must come from this library. Null is ignored.
 */
void fdl_string_free(char *s);

/**
 * Ingests a JSONL annotation stream and materializes it under `kb`.
 *
 * # Safety
 * `kb` must be a live handle, `jsonl` NUL-terminated, `out` writable.
 */
enum FdlStatus fdl_materialize(const struct FdlKb *kb, const char *jsonl, struct FdlClosure **out);

/**
 * # Safety
 * `closure` must come from this library and not be freed twice.
 */
void fdl_closure_free(struct FdlClosure *closure);

/**
 * Sets `*out` to whether `individual` is an instance of the concept term
 * `concept` in the closure.
 *
 * # Safety
 * `closure` must be a live handle, both strings NUL-terminated, `out`
 * writable.
 */
enum FdlStatus fdl_closure_instance_of(const struct FdlClosure *closure,
                                       const char *individual,
                                       const char *concept,
                                       bool *out);

/**
 * Sets `*out` to whether the closure violates no disjointness or
 * negative constraint.
 *
 * # Safety
 * `closure` must be a live handle and `out` writable.
 */
enum FdlStatus fdl_closure_is_consistent(const struct FdlClosure *closure, bool *out);

/**
 * Precision, recall and F1 of a contingency table.
 *
 * # Safety
 * The three out-pointers must be writable.
 */
enum FdlStatus fdl_prf(uint64_t tp,
                       uint64_t fp,
                       uint64_t false_neg,
                       double *precision,
                       double *recall,
                       double *f1);

/**
 * Returns the crate version as a static NUL-terminated string.
 */
const char *fdl_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FORENSIC_DL_H */
