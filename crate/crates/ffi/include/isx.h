#ifndef ISX_H
#define ISX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. Zero is success.
 */
typedef enum IsxStatus {
  ISX_STATUS_OK = 0,
  ISX_STATUS_NULL_ARGUMENT = 1,
  ISX_STATUS_INVALID_UTF8 = 2,
  ISX_STATUS_PARSE = 3,
  ISX_STATUS_INVALID = 4,
  ISX_STATUS_PRECONDITION = 5,
  ISX_STATUS_SHAPE = 6,
  ISX_STATUS_INTERNAL = 7,
  ISX_STATUS_BUFFER_TOO_SMALL = 8,
  ISX_STATUS_PANIC = 9,
} IsxStatus;

/*
 Opaque handle to a parsed instance.
 */
typedef struct IsxInstance IsxInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. Valid until the
 next call into this library on the same thread.
 */
const char *isx_last_error(void);

/*
 Parses an instance from a NUL-terminated JSON document.

 # Safety
 `json` must be null or a valid C string; `out` must be null or writable.
 */
enum IsxStatus isx_instance_from_json(const char *json, struct IsxInstance **out);

/*
 Builds a named built-in instance (`pinched-torus` or `empty`).

 # Safety
 As for [`isx_instance_from_json`].
 */
enum IsxStatus isx_instance_fixture(const char *name, struct IsxInstance **out);

/*
 Releases a handle. Null is ignored.

 # Safety
 `inst` must come from this library and not be freed twice.
 */
void isx_instance_free(struct IsxInstance *inst);

/*
 Serializes the instance back to JSON.

 # Safety
 `inst` must be a live handle or null; `out` must be null or writable.
 */
enum IsxStatus isx_instance_to_json(const struct IsxInstance *inst, char **out);

/*
 Runs the tube and global validators. `*valid` is 1 when both pass; the
 failure list is then available as the error message when 0.

 # Safety
 `inst` must be a live handle or null; `valid` must be null or writable.
 */
enum IsxStatus isx_instance_validate(const struct IsxInstance *inst, int32_t *valid);

/*
 Writes `dim H_ix(i)` for every degree of the instance, lowest first.
 Uses the Witt approximation when `witt` is nonzero and the default
 approximation otherwise. `*len` always receives the required length;
 `BufferTooSmall` is returned when `capacity` is short.

 # Safety
 `dims` must be valid for `capacity` writes (or null when `capacity` is 0);
 `len` and `min_degree` must be writable; `inst` a live handle or null.
 */
enum IsxStatus isx_homology_dims(const struct IsxInstance *inst,
                                 int32_t witt,
                                 size_t *dims,
                                 size_t capacity,
                                 size_t *len,
                                 int32_t *min_degree);

/*
 Signature report as JSON, using the supplied approximation if present and
 the Witt approximation otherwise.

 # Safety
 `inst` must be a live handle or null; `out` must be null or writable.
 */
enum IsxStatus isx_signature_json(const struct IsxInstance *inst, char **out);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void isx_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISX_H */
