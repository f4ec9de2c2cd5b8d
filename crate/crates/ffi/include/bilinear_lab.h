#ifndef BILINEAR_LAB_H
#define BILINEAR_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define BL_OK 0

// A required pointer argument was null or a length did not match.
#define BL_ERR_ARGUMENT 1

#define BL_ERR_INVALID_GRID 2

#define BL_ERR_BAND_LIMIT 3

#define BL_ERR_GRID_MISMATCH 4

#define BL_ERR_OUTSIDE_WINDOW 5

#define BL_ERR_INVALID_PARAMETER 6

#define BL_ERR_DEGENERATE 7

#define BL_ERR_LATTICE_ONLY 8

#define BL_ERR_QUADRATURE 9

#define BL_ERR_COVER_FAILURE 10

#define BL_ERR_INSUFFICIENT_POINTS 11

#define BL_ERR_CONFIG 12

// The library panicked; the handle arguments are left untouched.
#define BL_ERR_PANIC 99

#define BL_BOUNDED 1

#define BL_UNBOUNDED -1

#define BL_UNDETERMINED 0

// Norm selector for `bl_norm`.
typedef enum BlSpace {
  BL_SPACE_LEBESGUE = 0,
  BL_SPACE_SOBOLEV = 1,
  BL_SPACE_LOCAL_HARDY = 2,
  BL_SPACE_BMO = 3,
} BlSpace;

// Sampled band-limited function handle.
typedef struct BlFunction BlFunction;

// Torus grid handle.
typedef struct BlGrid BlGrid;

// Bilinear symbol handle.
typedef struct BlSymbol BlSymbol;

// Index tuple in C form. Exponents are given by reciprocals `num/den` (`0/1` is `∞`);
// smoothness indices and the order by `num/den`.
typedef struct BlIndexTuple {
  uint32_t n;
  int64_t p1[2];
  int64_t p2[2];
  int64_t p[2];
  int64_t s1[2];
  int64_t s2[2];
  int64_t s[2];
  int64_t m[2];
} BlIndexTuple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Length of the last error message on this thread, 0 if none was recorded.
size_t bl_last_error_length(void);

// Copies the last error message, NUL-terminated and truncated to `capacity`.
// Returns the full message length excluding the terminator.
//
// # Safety
// `buf` must be null or point to `capacity` writable bytes.
size_t bl_last_error_message(char *buf, size_t capacity);

// Grid of `size^dim` points on `[0,2π)^dim` carrying frequencies `|k|_∞ ≤ band_limit`.
//
// # Safety
// `out` must be a valid pointer to a handle slot.
int32_t bl_grid_new(size_t dim, size_t size, size_t band_limit, struct BlGrid **out);

// Number of sample points of the grid, 0 for a null handle.
//
// # Safety
// `grid` must be null or a live grid handle.
size_t bl_grid_len(const struct BlGrid *grid);

// # Safety
// `grid` must be null or a handle from `bl_grid_new` not already freed.
void bl_grid_free(struct BlGrid *grid);

// Function from `len` complex samples in row-major order; `len` must equal the grid length.
// Fails with `BL_ERR_BAND_LIMIT` when the samples carry frequencies beyond the band.
//
// # Safety
// `re` and `im` must point to `len` readable doubles; `im` may be null for real data.
int32_t bl_function_from_samples(const struct BlGrid *grid,
                                 const double *re,
                                 const double *im,
                                 size_t len,
                                 struct BlFunction **out);

// Copies the samples out; `len` must equal the grid length. Either output may be null.
//
// # Safety
// Non-null `re`/`im` must point to `len` writable doubles.
int32_t bl_function_samples(const struct BlFunction *f, double *re, double *im, size_t len);

// # Safety
// `f` must be null or a live function handle.
void bl_function_free(struct BlFunction *f);

// The constant symbol `re + i·im`.
//
// # Safety
// `out` must be a valid pointer to a handle slot.
int32_t bl_symbol_constant(size_t dim, double re, double im, struct BlSymbol **out);

// `(1+|ξ_1|²+|ξ_2|²)^{m/2}`.
//
// # Safety
// `out` must be a valid pointer to a handle slot.
int32_t bl_symbol_bracket_power(size_t dim, double m, struct BlSymbol **out);

// `τ(σ) = ⟨ξ_1+ξ_2⟩^s σ ⟨ξ_1⟩^{-s_1} ⟨ξ_2⟩^{-s_2}`.
//
// # Safety
// `sigma` must be a live symbol handle and `out` a valid handle slot.
int32_t bl_symbol_tau(const struct BlSymbol *sigma,
                      double s1,
                      double s2,
                      double s,
                      struct BlSymbol **out);

// # Safety
// `sigma` must be null or a live symbol handle.
void bl_symbol_free(struct BlSymbol *sigma);

// `T_σ(f_1, f_2)` on the grid of the inputs.
//
// # Safety
// All handles must be live and `out` a valid handle slot.
int32_t bl_apply_bilinear(const struct BlSymbol *sigma,
                          const struct BlFunction *f1,
                          const struct BlFunction *f2,
                          struct BlFunction **out);

// Norm of `f` in the selected space. The exponent is given by its reciprocal
// `recip_num/recip_den`, so `0/1` is `p = ∞`. `s` is ignored for `Lebesgue`, and the exponent
// for `Bmo`.
//
// # Safety
// `f` must be a live function handle and `out` a valid pointer.
int32_t bl_norm(const struct BlFunction *f,
                enum BlSpace space,
                int64_t recip_num,
                int64_t recip_den,
                double s,
                double *out);

// Critical order of the tuple; the reduced fraction goes to `num`/`den`, which may be null.
//
// # Safety
// `t` must point to a valid tuple; non-null outputs must be writable.
int32_t bl_critical_order(const struct BlIndexTuple *t, int64_t *num, int64_t *den, double *value);

// Writes `BL_BOUNDED`, `BL_UNBOUNDED` or `BL_UNDETERMINED`.
//
// # Safety
// `t` must point to a valid tuple and `out` be writable.
int32_t bl_classify(const struct BlIndexTuple *t, int32_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BILINEAR_LAB_H */
