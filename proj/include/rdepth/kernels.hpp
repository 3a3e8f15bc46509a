// Low-level projection kernels: fill y[i] = <u, z - x_i> for every point of
// a cloud. A scalar reference kernel defines the semantics; an AVX2 variant
// for d == 2 performs the same operations in the same order (difference
// first, then multiply, then a single add; no FMA), so both produce bitwise
// identical output. The variant is chosen once at runtime from CPU features,
// overridable via the RDEPTH_KERNEL environment variable ("auto", "scalar",
// "avx2").
#pragma once

#include <cstddef>
#include <string>

namespace rdepth {

using ProjectFn = void (*)(const double* points, std::size_t n, std::size_t d,
                           const double* z, const double* u, double* y);

// Reference kernel, any dimension. The accumulation order is part of the
// contract: y_i = sum over k (left to right) of u[k] * (z[k] - x[i][k]),
// which makes points coinciding with z project to exactly 0.
void project_scalar(const double* points, std::size_t n, std::size_t d,
                    const double* z, const double* u, double* y);

#ifdef RDEPTH_HAVE_AVX2_KERNEL
// AVX2 kernel specialized to d == 2; bitwise-equal to project_scalar.
void project_avx2_d2(const double* points, std::size_t n, std::size_t d,
                     const double* z, const double* u, double* y);
#endif

// Kernel selected for dimension d on this machine (honors RDEPTH_KERNEL).
ProjectFn active_project_fn(std::size_t d);

// Name of the kernel active_project_fn would return: "scalar" or "avx2-d2".
std::string active_kernel_name(std::size_t d);

}  // namespace rdepth
