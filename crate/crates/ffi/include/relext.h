#ifndef RELEXT_H
#define RELEXT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes returned by every fallible function.
typedef enum RelextStatus {
  RELEXT_STATUS_OK = 0,
  RELEXT_STATUS_NULL_POINTER = 1,
  RELEXT_STATUS_INVALID_UTF8 = 2,
  RELEXT_STATUS_PARSE = 3,
  RELEXT_STATUS_UNKNOWN_ALGEBRA = 4,
  RELEXT_STATUS_ALGEBRA = 5,
  RELEXT_STATUS_EXTENSION = 6,
  RELEXT_STATUS_UNSUPPORTED_DEGREE = 7,
  RELEXT_STATUS_PANIC = 8,
} RelextStatus;

// A bound quiver algebra built from one block of a file.
typedef struct RelextAlgebra RelextAlgebra;

// A parsed presentation file.
typedef struct RelextFile RelextFile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses presentation text. On success `*out` holds a new handle.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum RelextStatus relext_file_parse(const char *text, struct RelextFile **out);

// # Safety
// `file` must come from [`relext_file_parse`] or be null.
void relext_file_free(struct RelextFile *file);

// Builds the algebra named `name` over the field declared in its block.
//
// # Safety
// `file` must be a live handle, `name` a NUL-terminated string and `out` a valid pointer.
enum RelextStatus relext_algebra_build(const struct RelextFile *file,
                                       const char *name,
                                       struct RelextAlgebra **out);

// # Safety
// `algebra` must come from [`relext_algebra_build`] or be null.
void relext_algebra_free(struct RelextAlgebra *algebra);

// Writes the vector space dimension of the algebra to `*out`.
//
// # Safety
// `algebra` must be a live handle and `out` a valid pointer.
enum RelextStatus relext_algebra_dimension(const struct RelextAlgebra *algebra, uintptr_t *out);

// Writes `dim HH^degree(A)` to `*out`; `degree` is 0 or 1.
//
// # Safety
// `algebra` must be a live handle and `out` a valid pointer.
enum RelextStatus relext_hh_dimension(const struct RelextAlgebra *algebra,
                                      uint32_t degree,
                                      uintptr_t *out);

// Runs the full verification for the extension `base ⊂ tilde` split along the
// comma separated arrow list `split` (null or empty for none) and returns the
// report as JSON. Release the string with [`relext_string_free`].
//
// The status is `Ok` whenever a report was produced; check its `passed` field.
//
// # Safety
// `file` must be a live handle, the strings NUL-terminated (or `split` null) and `out` a valid pointer.
enum RelextStatus relext_verify_json(const struct RelextFile *file,
                                     const char *base,
                                     const char *tilde,
                                     const char *split,
                                     bool oracle,
                                     char **out);

// # Safety
// `s` must come from this library or be null.
void relext_string_free(char *s);

// Message for the last failing call on this thread, or null. The pointer
// stays valid until the next call into the library on the same thread.
const char *relext_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RELEXT_H */
