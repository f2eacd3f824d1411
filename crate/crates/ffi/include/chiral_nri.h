#ifndef CHIRAL_NRI_H
#define CHIRAL_NRI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Use Γ₂ in A₁₁.
 */
#define CNRI_REPAIR_A11_CONTROL_DAMPING 1

/**
 * Conjugate loop phase on α_HE.
 */
#define CNRI_REPAIR_HE_CONJUGATE_PHASE 2

/**
 * Δ_m − Δ_c detuning for the ρ23 coherence.
 */
#define CNRI_REPAIR_RHO23_MAGNETIC_DETUNING 4

/**
 * Per-point sweep flags.
 */
#define CNRI_POINT_OK 0

#define CNRI_POINT_POLE 1

#define CNRI_POINT_LOCAL_FIELD_SINGULAR 2

typedef enum CnriStatus {
  CNRI_STATUS_OK = 0,
  CNRI_STATUS_NULL_POINTER = 1,
  CNRI_STATUS_INVALID_INPUT = 2,
  CNRI_STATUS_SINGULAR_DENOMINATOR = 3,
  CNRI_STATUS_LOCAL_FIELD_SINGULAR = 4,
  CNRI_STATUS_DEGENERATE_KERNEL = 5,
  CNRI_STATUS_SINGULAR_SHIFTED_GENERATOR = 6,
  CNRI_STATUS_BUFFER_TOO_SMALL = 7,
  CNRI_STATUS_PANIC = 8,
} CnriStatus;

/**
 * Opaque model handle.
 */
typedef struct CnriModel CnriModel;

/**
 * Rates in units of `gamma_scale` (s⁻¹).
 */
typedef struct CnriRates {
  double gamma_scale;
  double gamma21;
  double gamma31;
  double gamma42;
  double gamma43;
  double gamma_c;
} CnriRates;

typedef struct CnriDrive {
  double omega_c;
  double omega_s;
  double theta;
} CnriDrive;

typedef struct CnriDetunings {
  double delta_p;
  double delta_c;
  double delta_s;
  double delta_m;
} CnriDetunings;

typedef struct CnriComplex {
  double re;
  double im;
} CnriComplex;

typedef struct CnriAlphas {
  struct CnriComplex ee;
  struct CnriComplex eh;
  struct CnriComplex he;
  struct CnriComplex hh;
} CnriAlphas;

typedef struct CnriConstitutive {
  struct CnriComplex eps_r;
  struct CnriComplex mu_r;
  struct CnriComplex xi_eh;
  struct CnriComplex xi_he;
  struct CnriComplex n;
} CnriConstitutive;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * New handle with the reference medium and rates. Free with
 * [`cnri_model_free`].
 */
struct CnriModel *cnri_model_new(void);

/**
 * # Safety
 * `model` must be null or a handle from [`cnri_model_new`] not yet freed.
 */
void cnri_model_free(struct CnriModel *model);

/**
 * # Safety
 * `model` and `rates` must be valid pointers.
 */
enum CnriStatus cnri_model_set_rates(struct CnriModel *model, const struct CnriRates *rates);

/**
 * Density in m⁻³, wavelength in m.
 *
 * # Safety
 * `model` must be a valid handle.
 */
enum CnriStatus cnri_model_set_medium(struct CnriModel *model,
                                      double atom_density,
                                      double wavelength,
                                      bool paper_literal_mapping);

/**
 * `repairs` is a bit set of `CNRI_REPAIR_*`.
 *
 * # Safety
 * `model` must be a valid handle.
 */
enum CnriStatus cnri_model_set_options(struct CnriModel *model,
                                       bool gamma6_includes_dephasing,
                                       uint32_t repairs,
                                       double denominator_floor);

/**
 * Closed-form response coefficients. `out_si` receives SI values;
 * `out_reduced` (may be null) the values per unit Rabi frequency.
 *
 * # Safety
 * Non-null pointers must be valid.
 */
enum CnriStatus cnri_alpha(const struct CnriModel *model,
                           const struct CnriDrive *drive,
                           const struct CnriDetunings *det,
                           struct CnriAlphas *out_si,
                           struct CnriAlphas *out_reduced);

/**
 * Full pipeline at one point.
 *
 * # Safety
 * Pointers must be valid.
 */
enum CnriStatus cnri_constitutive(const struct CnriModel *model,
                                  const struct CnriDrive *drive,
                                  const struct CnriDetunings *det,
                                  struct CnriConstitutive *out);

/**
 * Liouville-oracle coefficients per unit Rabi frequency and the largest
 * relative solve residual (`out_residual` may be null).
 *
 * # Safety
 * Non-null pointers must be valid.
 */
enum CnriStatus cnri_oracle_alpha(const struct CnriModel *model,
                                  const struct CnriDrive *drive,
                                  const struct CnriDetunings *det,
                                  struct CnriAlphas *out_reduced,
                                  double *out_residual);

/**
 * Evaluate `count` probe detunings; `det.delta_p` is ignored. Flagged
 * points get NaN values and a nonzero `CNRI_POINT_*` flag. Both output
 * buffers must hold `capacity >= count` entries.
 *
 * # Safety
 * `delta_p` must point to `count` doubles; `out` and `flags` to
 * `capacity` elements each.
 */
enum CnriStatus cnri_sweep(const struct CnriModel *model,
                           const struct CnriDrive *drive,
                           const struct CnriDetunings *det,
                           const double *delta_p,
                           size_t count,
                           struct CnriConstitutive *out,
                           uint8_t *flags,
                           size_t capacity);

/**
 * Static description of a status code.
 */
const char *cnri_status_message(enum CnriStatus status);

/**
 * Copy the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len`). Returns the full message length
 * excluding the NUL, or 0 if there is none.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t cnri_last_error_message(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHIRAL_NRI_H */
