#pragma once

#include <cstddef>

// Data-parallel inner loops, provided as scalar reference kernels plus an
// AVX2 variant picked at runtime.  The scalar kernels define the semantics;
// the vector ones must agree with them within round-off (see the kernel
// equivalence tests).  Set QRLIM_FORCE_SCALAR=1 in the environment to pin
// the dispatcher to the reference path.

namespace qrlim::kernels {

// Pairwise geometry for structure-of-arrays point batches.
// xs/ys hold `dim` coordinate arrays of length `count` each.
// Outputs, per pair i:
//   dist[i] = |x_i - y_i|
//   nx[i]   = |x_i|
//   ny[i]   = |y_i|
void pair_norms_scalar(const double* const* xs, const double* const* ys, int dim,
                       std::size_t count, double* dist, double* nx, double* ny);

// Sum over lattice cells of |forward-difference gradient|^p in lattice units,
// p in {2, 3}.  p == 2 pairs with a 2-D grid (nz == 1), p == 3 with a 3-D one.
// Neighbors outside the box count as 0.
double grad_energy_sum_scalar(const double* u, int nx, int ny, int nz, int p);

#if defined(QRLIM_HAVE_AVX2)
void pair_norms_avx2(const double* const* xs, const double* const* ys, int dim,
                     std::size_t count, double* dist, double* nx, double* ny);
double grad_energy_sum_avx2(const double* u, int nx, int ny, int nz, int p);
#endif

// Runtime-dispatched entry points.
void pair_norms(const double* const* xs, const double* const* ys, int dim,
                std::size_t count, double* dist, double* nx, double* ny);
double grad_energy_sum(const double* u, int nx, int ny, int nz, int p);

bool avx2_active();
const char* active_isa_name();

}  // namespace qrlim::kernels
