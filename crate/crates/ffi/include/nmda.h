#ifndef NMDA_H
#define NMDA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call.
 */
typedef enum NmdaStatus {
  /**
   * The call succeeded and its outputs were written.
   */
  NMDA_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  NMDA_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  NMDA_STATUS_INVALID_UTF8 = 2,
  /**
   * The automaton text or a word could not be parsed.
   */
  NMDA_STATUS_PARSE = 3,
  /**
   * The input violates a structural requirement or a precondition.
   */
  NMDA_STATUS_INVALID = 4,
  /**
   * The automaton is not tidy.
   */
  NMDA_STATUS_NOT_TIDY = 5,
  /**
   * Two automata follow different choice functions.
   */
  NMDA_STATUS_INCOMPATIBLE = 6,
  /**
   * A search exceeded its configuration budget.
   */
  NMDA_STATUS_BUDGET = 7,
  /**
   * The library panicked; the handle arguments are still valid.
   */
  NMDA_STATUS_PANIC = 8,
} NmdaStatus;

/**
 * Word mode of a decision problem.
 */
typedef enum NmdaMode {
  /**
   * Nonempty finite words.
   */
  NMDA_MODE_FINITE = 0,
  /**
   * Infinite words.
   */
  NMDA_MODE_INFINITE = 1,
} NmdaMode;

/**
 * An automaton owned by the library.
 */
typedef struct NmdaAutomaton NmdaAutomaton;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *nmda_last_error(void);

/**
 * Parses an `NMDA` or `DMDA` document into a new handle.
 *
 * # Safety
 * `text` is a NUL-terminated string and `out` is valid for writes.
 */
enum NmdaStatus nmda_automaton_parse(const char *text, struct NmdaAutomaton **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `a` is null or a handle not yet freed.
 */
void nmda_automaton_free(struct NmdaAutomaton *a);

/**
 * Releases a string returned by the library; null is ignored.
 *
 * # Safety
 * `s` is null or a string returned by the library and not yet freed.
 */
void nmda_string_free(char *s);

/**
 * The number of states, or 0 for a null handle.
 *
 * # Safety
 * `a` is null or a live handle.
 */
size_t nmda_automaton_num_states(const struct NmdaAutomaton *a);

/**
 * Renders the automaton in the text format.
 *
 * # Safety
 * `a` is a live handle and `out` is valid for writes.
 */
enum NmdaStatus nmda_automaton_to_string(const struct NmdaAutomaton *a, char **out);

/**
 * The value of a finite word, rendered `p/q`.
 *
 * # Safety
 * `a` is a live handle, `word` a NUL-terminated string and `out` valid for
 * writes.
 */
enum NmdaStatus nmda_word_value(const struct NmdaAutomaton *a, const char *word, char **out);

/**
 * The value of a lasso word `prefix:cycle`, rendered `p/q`. Automata that
 * are not tidy are evaluated through the product game.
 *
 * # Safety
 * `a` is a live handle, `lasso` a NUL-terminated string and `out` valid for
 * writes.
 */
enum NmdaStatus nmda_lasso_value(const struct NmdaAutomaton *a, const char *lasso, char **out);

/**
 * Whether every run on a word ends with the same discount factor.
 *
 * # Safety
 * `a` is a live handle and `out` valid for writes.
 */
enum NmdaStatus nmda_is_tidy(const struct NmdaAutomaton *a, bool *out);

/**
 * Determinizes a tidy integral automaton into a new handle. A `budget` of
 * zero means no limit on the number of configurations.
 *
 * # Safety
 * `a` is a live handle and `out` valid for writes.
 */
enum NmdaStatus nmda_determinize(const struct NmdaAutomaton *a,
                                 size_t budget,
                                 struct NmdaAutomaton **out);

/**
 * Whether both automata agree on every word of the mode.
 *
 * # Safety
 * `a` and `b` are live handles and `out` valid for writes.
 */
enum NmdaStatus nmda_equivalent(const struct NmdaAutomaton *a,
                                const struct NmdaAutomaton *b,
                                enum NmdaMode word_mode,
                                bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NMDA_H */
