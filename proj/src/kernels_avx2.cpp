// AVX2 projection kernel for two-dimensional clouds. This translation unit
// is compiled with -mavx2 (and without FMA) so its arithmetic matches the
// scalar kernel operation for operation: subtract, multiply, one add.
#include "rdepth/kernels.hpp"

#ifdef RDEPTH_HAVE_AVX2_KERNEL

#include <immintrin.h>

namespace rdepth {

void project_avx2_d2(const double* points, std::size_t n, std::size_t d,
                     const double* z, const double* u, double* y) {
    (void)d;  // caller guarantees d == 2
    const __m256d zz = _mm256_setr_pd(z[0], z[1], z[0], z[1]);
    const __m256d uu = _mm256_setr_pd(u[0], u[1], u[0], u[1]);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // Two points per iteration: [x_i0, x_i1, x_{i+1}0, x_{i+1}1].
        const __m256d x = _mm256_loadu_pd(points + 2 * i);
        const __m256d diff = _mm256_sub_pd(zz, x);
        const __m256d prod = _mm256_mul_pd(diff, uu);
        // hadd within 128-bit lanes: [p0+p1, p0+p1, p2+p3, p2+p3].
        const __m256d sums = _mm256_hadd_pd(prod, prod);
        y[i] = _mm256_cvtsd_f64(sums);
        y[i + 1] = _mm256_cvtsd_f64(_mm256_permute4x64_pd(sums, 0xE));
    }
    if (i < n) {
        const double* x = points + 2 * i;
        y[i] = u[0] * (z[0] - x[0]) + u[1] * (z[1] - x[1]);
    }
}

}  // namespace rdepth

#endif  // RDEPTH_HAVE_AVX2_KERNEL
