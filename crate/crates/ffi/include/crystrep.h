#ifndef CRYSTREP_H
#define CRYSTREP_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CrystrepStatus {
  CRYSTREP_STATUS_OK = 0,
  CRYSTREP_STATUS_INVALID_INPUT = 1,
  CRYSTREP_STATUS_COMPUTATION = 2,
  CRYSTREP_STATUS_NULL_POINTER = 3,
  CRYSTREP_STATUS_BUFFER_TOO_SMALL = 4,
  CRYSTREP_STATUS_PANIC = 5,
} CrystrepStatus;

// Opaque group handle.
typedef struct CrystrepGroup CrystrepGroup;

// Opaque representation handle.
typedef struct CrystrepRep CrystrepRep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or null. Owned by the
// library; valid until the next call on this thread.
const char *crystrep_last_error(void);

// # Safety
// `s` must be null or a string returned by this library.
void crystrep_string_free(char *s);

// Builtin group by name: `gamma-k:<k>`, `z:<k>` or `p4`.
//
// # Safety
// `name` must be a valid C string and `out` a valid pointer.
enum CrystrepStatus crystrep_group_builtin(const char *name, struct CrystrepGroup **out);

// Group from the plain-text definition format.
//
// # Safety
// `text` must be a valid C string and `out` a valid pointer.
enum CrystrepStatus crystrep_group_parse(const char *text, struct CrystrepGroup **out);

// # Safety
// `g` must be null or a handle from this library, not yet freed.
void crystrep_group_free(struct CrystrepGroup *g);

// Rank of the translation lattice; 0 for a null handle.
//
// # Safety
// `g` must be null or a live group handle.
uintptr_t crystrep_group_rank(const struct CrystrepGroup *g);

// Order of the point group; 0 for a null handle.
//
// # Safety
// `g` must be null or a live group handle.
uintptr_t crystrep_group_point_order(const struct CrystrepGroup *g);

// Parses and verifies a representation in the JSON exchange format.
//
// # Safety
// `g` must be a live group handle, `json` a valid C string, `out` a valid pointer.
enum CrystrepStatus crystrep_rep_from_json(const struct CrystrepGroup *g,
                                           const char *json,
                                           struct CrystrepRep **out);

// The 2-dimensional family representation of `Γ_k`. Angles are in turns:
// `z_i = exp(2πi z_turns[i])`, `α = exp(2πi alpha_turns)`.
//
// # Safety
// `z_turns` must point to `k` doubles and `out` be a valid pointer.
enum CrystrepStatus crystrep_rep_family(uintptr_t k,
                                        const double *z_turns,
                                        double alpha_turns,
                                        struct CrystrepRep **out);

// # Safety
// `r` must be null or a handle from this library, not yet freed.
void crystrep_rep_free(struct CrystrepRep *r);

// Dimension; 0 for a null handle.
//
// # Safety
// `r` must be null or a live representation handle.
uintptr_t crystrep_rep_dim(const struct CrystrepRep *r);

// JSON text of the representation; free with [`crystrep_string_free`].
//
// # Safety
// `r` must be a live handle and `out` a valid pointer.
enum CrystrepStatus crystrep_rep_to_json(const struct CrystrepRep *r, char **out);

// Schur's criterion on the commutant.
//
// # Safety
// `r` must be a live handle and `out` a valid pointer.
enum CrystrepStatus crystrep_rep_is_irreducible(const struct CrystrepRep *r, bool *out);

// Local dimension of the moduli space at an irreducible representation.
//
// # Safety
// `r` must be a live handle and `out` a valid pointer.
enum CrystrepStatus crystrep_rep_local_moduli_dim(const struct CrystrepRep *r, uintptr_t *out);

// `π₀` of the deformation representation ring of `Γ_k` as
// `ℤ^free_rank ⊕ (ℤ/2)^two_torsion`; other torsion is reported as an error.
//
// # Safety
// Both out pointers must be valid.
enum CrystrepStatus crystrep_rdef_pi0(uintptr_t k, uintptr_t *free_rank, uintptr_t *two_torsion);

// Ranks of `H^n(Γ_k; ℚ)` for `n = 0..=k+1` into `ranks[0..cap]`; `len`
// receives the number of degrees even when the buffer is too small.
//
// # Safety
// `ranks` must point to `cap` writable entries (or be null with `cap = 0`);
// `len` must be valid.
enum CrystrepStatus crystrep_rational_cohomology(uintptr_t k,
                                                 uintptr_t *ranks,
                                                 uintptr_t cap,
                                                 uintptr_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRYSTREP_H */
