#ifndef BALLMAP_H
#define BALLMAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum BmStatus {
  BM_STATUS_OK = 0,
  BM_STATUS_NULL_POINTER = 1,
  BM_STATUS_INVALID_ARGUMENT = 2,
  BM_STATUS_DIMENSION_MISMATCH = 3,
  BM_STATUS_NOT_HERMITIAN = 4,
  BM_STATUS_NOT_A_STATE = 5,
  BM_STATUS_NOT_FAITHFUL = 6,
  BM_STATUS_NOT_BALL_PRESERVING = 7,
  BM_STATUS_INTERNAL = 99,
} BmStatus;

/**
 * Any linear map `M_n → M_n` built by this library.
 */
typedef struct BmMap BmMap;

/**
 * Faithful state `ρ̃` together with its eigendecomposition.
 */
typedef struct BmState BmState;

/**
 * Hermitian operator on `C^dA ⊗ C^dB`.
 */
typedef struct BmWitness BmWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *bm_version(void);

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next call into the library from the same thread.
 */
const char *bm_last_error(void);

/**
 * State with the given spectrum in the computational basis.
 *
 * # Safety
 * `eigenvalues` must point to `n` doubles; `out` must be writable.
 */
enum BmStatus bm_state_new_diagonal(const double *eigenvalues, size_t n, struct BmState **out);

/**
 * State from a full density matrix.
 *
 * # Safety
 * `re` (and `im` unless NULL) must point to `n*n` doubles; `out` must be writable.
 */
enum BmStatus bm_state_new_matrix(size_t n,
                                  const double *re,
                                  const double *im,
                                  struct BmState **out);

/**
 * `I/n`.
 *
 * # Safety
 * `out` must be writable.
 */
enum BmStatus bm_state_new_maximally_mixed(size_t n, struct BmState **out);

/**
 * # Safety
 * `state` must be NULL or a handle from `bm_state_new*` not yet freed.
 */
void bm_state_free(struct BmState *state);

/**
 * Matrix size `n`, or 0 for NULL.
 *
 * # Safety
 * `state` must be NULL or a live handle.
 */
size_t bm_state_dim(const struct BmState *state);

/**
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum BmStatus bm_state_r_max(const struct BmState *state, double *out);

/**
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum BmStatus bm_state_mu_max(const struct BmState *state, double *out);

/**
 * Tangency point `α*` (the `n−1` free simplex coordinates).
 *
 * # Safety
 * `state` must be a live handle; `out` must point to `len` writable doubles.
 */
enum BmStatus bm_state_tangency(const struct BmState *state, double *out, size_t len);

/**
 * `φ_μ(a) = μ a + (1−μ) ρ̃ tr a`.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum BmStatus bm_map_new_phi(const struct BmState *state, double mu, struct BmMap **out);

/**
 * `φ_μ[T,t]` with an extremal affine map built from two seeded random rotations.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum BmStatus bm_map_new_extremal(const struct BmState *state,
                                  double mu,
                                  double kappa,
                                  double delta,
                                  uint64_t r1_seed,
                                  uint64_t r2_seed,
                                  struct BmMap **out);

/**
 * Qutrit family at angle `alpha`; `state` must be 3×3.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum BmStatus bm_map_new_choi_family(const struct BmState *state, double alpha, struct BmMap **out);

/**
 * The classic Choi map on `M_3`.
 *
 * # Safety
 * `out` must be writable.
 */
enum BmStatus bm_map_new_classic_choi(struct BmMap **out);

/**
 * # Safety
 * `map` must be NULL or a handle from `bm_map_new*` not yet freed.
 */
void bm_map_free(struct BmMap *map);

/**
 * # Safety
 * `map` must be NULL or a live handle.
 */
size_t bm_map_dim(const struct BmMap *map);

/**
 * Applies the map to an `n×n` matrix.
 *
 * # Safety
 * `map` must be a live handle; inputs must point to `n*n` readable doubles
 * (`im_in` may be NULL) and outputs to `n*n` writable ones (`im_out` may be NULL).
 */
enum BmStatus bm_map_apply(const struct BmMap *map,
                           const double *re_in,
                           const double *im_in,
                           double *re_out,
                           double *im_out);

/**
 * Smallest eigenvalue of the Choi matrix; negative iff the map is not CP.
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum BmStatus bm_map_choi_min_eigenvalue(const struct BmMap *map, double *out);

/**
 * Sampled positivity scan; `out_bound` receives the smallest eigenvalue found.
 *
 * # Safety
 * `map` must be a live handle; `out_bound` must be writable.
 */
enum BmStatus bm_map_positivity_scan(const struct BmMap *map,
                                     size_t samples,
                                     size_t restarts,
                                     uint64_t seed,
                                     double *out_bound);

/**
 * `W = Σ_ij e_ij ⊗ φ(e_ij)`.
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum BmStatus bm_witness_from_map(const struct BmMap *map, struct BmWitness **out);

/**
 * # Safety
 * `w` must be NULL or a handle from `bm_witness_*` not yet freed.
 */
void bm_witness_free(struct BmWitness *w);

/**
 * Total dimension `dA·dB`, or 0 for NULL.
 *
 * # Safety
 * `w` must be NULL or a live handle.
 */
size_t bm_witness_dim(const struct BmWitness *w);

/**
 * Copies the operator out as row-major `N×N`, `N = bm_witness_dim(w)`.
 *
 * # Safety
 * `w` must be a live handle; `re` must point to `N*N` writable doubles, `im` likewise or NULL.
 */
enum BmStatus bm_witness_matrix(const struct BmWitness *w, double *re, double *im);

/**
 * # Safety
 * `w` must be a live handle; `out` must be writable.
 */
enum BmStatus bm_witness_min_eigenvalue(const struct BmWitness *w, double *out);

/**
 * `Tr(W ρ)` for a density matrix `ρ`.
 *
 * # Safety
 * `w` must be a live handle; `re` (and `im` unless NULL) must point to `N*N` doubles.
 */
enum BmStatus bm_witness_detect(const struct BmWitness *w,
                                const double *re,
                                const double *im,
                                double *out);

/**
 * Alternating product-vector minimization. `out_bound` receives the lowest
 * `<x⊗y|W|x⊗y>` found; `out_block_positive` whether it stayed above the
 * certificate tolerance. The result is cached on the handle.
 *
 * # Safety
 * `w` must be a live handle not used concurrently; outputs must be writable.
 */
enum BmStatus bm_witness_block_positivity(struct BmWitness *w,
                                          size_t restarts,
                                          uint64_t seed,
                                          double *out_bound,
                                          bool *out_block_positive);

/**
 * Negative eigenvalue plus block positivity found by the last
 * `bm_witness_block_positivity` call.
 *
 * # Safety
 * `w` must be NULL or a live handle.
 */
bool bm_witness_is_entanglement_witness(const struct BmWitness *w);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BALLMAP_H */
