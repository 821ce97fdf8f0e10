/* Copyright 2026 The relatherm Authors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef RELATHERM_H
#define RELATHERM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RtCoupling {
  RT_COUPLING_UDW = 0,
  RT_COUPLING_TD = 1,
} RtCoupling;

typedef enum RtStatus {
  RT_STATUS_OK = 0,
  RT_STATUS_NULL_POINTER = 1,
  // Argument outside the domain of the operation.
  RT_STATUS_DOMAIN = 2,
  // Quadrature, integrator or invariant failure.
  RT_STATUS_NUMERICAL = 3,
  // The stationary state is not unique.
  RT_STATUS_DEGENERATE_STATIONARY = 4,
  RT_STATUS_DIMENSION_MISMATCH = 5,
  RT_STATUS_INVALID_MATRIX = 6,
  RT_STATUS_PANIC = 7,
} RtStatus;

// Bath parameters.
typedef struct RtBath RtBath;

// Master-equation generator of a system in a bath.
typedef struct RtGenerator RtGenerator;

// Probe Hamiltonian and coupling operator.
typedef struct RtSystem RtSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *rt_version(void);

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`) and returns the full message length in bytes.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
uintptr_t rt_last_error_message(char *buf, uintptr_t len);

// # Safety
// `out` must be valid for writing a pointer.
enum RtStatus rt_bath_new(enum RtCoupling coupling,
                          double beta,
                          double u,
                          double lambda,
                          struct RtBath **out);

// # Safety
// `bath` must be null or a handle from [`rt_bath_new`] not yet freed.
void rt_bath_free(struct RtBath *bath);

// Effective occupation N(ω).
//
// # Safety
// `bath` must be a live handle and `out` valid for writing.
enum RtStatus rt_bath_occupation(const struct RtBath *bath, double omega, double *out);

// Vacuum decay rate γ(ω).
//
// # Safety
// `bath` must be a live handle and `out` valid for writing.
enum RtStatus rt_bath_rate(const struct RtBath *bath, double omega, double *out);

// Energy shift Δ(ω) with short-time cutoff ε.
//
// # Safety
// `bath` must be a live handle and `out` valid for writing.
enum RtStatus rt_bath_lamb_shift(const struct RtBath *bath,
                                 double omega,
                                 double epsilon,
                                 double *out);

// System from row-major `dim`×`dim` matrices; a null imaginary part means zero.
//
// # Safety
// Non-null array arguments must hold `dim * dim` values; `out` must be
// valid for writing a pointer.
enum RtStatus rt_system_new(uintptr_t dim,
                            const double *h_re,
                            const double *h_im,
                            const double *a_re,
                            const double *a_im,
                            struct RtSystem **out);

// Qubit h = ½Ω₀σ_z, A = σ_x in the basis (excited, ground).
//
// # Safety
// `out` must be valid for writing a pointer.
enum RtStatus rt_system_qubit(double omega0, struct RtSystem **out);

// # Safety
// `system` must be null or a live handle.
void rt_system_free(struct RtSystem *system);

// Hilbert-space dimension, or 0 for a null handle.
//
// # Safety
// `system` must be null or a live handle.
uintptr_t rt_system_dim(const struct RtSystem *system);

// Generator of the master equation. `include_lamb` ≠ 0 adds the Lamb shift
// with cutoff `epsilon`.
//
// # Safety
// `system` and `bath` must be live handles; `out` valid for writing a pointer.
enum RtStatus rt_generator_new(const struct RtSystem *system,
                               const struct RtBath *bath,
                               int include_lamb,
                               double epsilon,
                               struct RtGenerator **out);

// # Safety
// `generator` must be null or a live handle.
void rt_generator_free(struct RtGenerator *generator);

// Unique stationary state, written as row-major real and imaginary parts.
//
// # Safety
// `generator` must be a live handle; `out_re`, `out_im` must hold dim² values.
enum RtStatus rt_generator_stationary(const struct RtGenerator *generator,
                                      double tol,
                                      double *out_re,
                                      double *out_im);

// Evolves ρ₀ to `t_final` with block matrix exponentials.
//
// # Safety
// `generator` must be a live handle; input and output arrays must hold
// dim² values (`rho_im` may be null).
enum RtStatus rt_generator_evolve(const struct RtGenerator *generator,
                                  const double *rho_re,
                                  const double *rho_im,
                                  double t_final,
                                  double *out_re,
                                  double *out_im);

// Heat current q = Tr(ℒ[ρ] h).
//
// # Safety
// `generator` must be a live handle; arrays must hold dim² values
// (`rho_im` may be null); `out` valid for writing.
enum RtStatus rt_generator_heat_current(const struct RtGenerator *generator,
                                        const double *rho_re,
                                        const double *rho_im,
                                        double *out);

// Thermal Hadamard function G_β(t, r) at complex time t from the image sum
// truncated at `nmax`.
//
// # Safety
// `out_re` and `out_im` must be valid for writing.
enum RtStatus rt_hadamard_thermal(double beta,
                                  uintptr_t nmax,
                                  double t_re,
                                  double t_im,
                                  double r,
                                  double *out_re,
                                  double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RELATHERM_H */
