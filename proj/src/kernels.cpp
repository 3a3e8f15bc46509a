#include "rdepth/kernels.hpp"

#include <cstdlib>

#include "rdepth/core.hpp"

namespace rdepth {

void project_scalar(const double* points, std::size_t n, std::size_t d,
                    const double* z, const double* u, double* y) {
    if (d == 2) {
        // Kept structurally identical to the vector kernel: one product per
        // coordinate, one final add.
        const double z0 = z[0], z1 = z[1], u0 = u[0], u1 = u[1];
        for (std::size_t i = 0; i < n; ++i) {
            const double* x = points + 2 * i;
            y[i] = u0 * (z0 - x[0]) + u1 * (z1 - x[1]);
        }
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = points + d * i;
        double acc = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            acc += u[k] * (z[k] - x[k]);
        }
        y[i] = acc;
    }
}

namespace {

enum class KernelChoice { kAuto, kScalar, kAvx2 };

KernelChoice requested_choice() {
    const char* env = std::getenv("RDEPTH_KERNEL");
    if (env == nullptr || std::string(env).empty() || std::string(env) == "auto") {
        return KernelChoice::kAuto;
    }
    const std::string v(env);
    if (v == "scalar") return KernelChoice::kScalar;
    if (v == "avx2") return KernelChoice::kAvx2;
    throw Error("RDEPTH_KERNEL must be one of: auto, scalar, avx2 (got \"" + v + "\")");
}

bool avx2_usable() {
#ifdef RDEPTH_HAVE_AVX2_KERNEL
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

bool use_avx2_d2() {
    // Decided once; the environment variable is read at first use.
    static const bool enabled = [] {
        switch (requested_choice()) {
            case KernelChoice::kScalar:
                return false;
            case KernelChoice::kAvx2:
                if (!avx2_usable()) {
                    throw Error("RDEPTH_KERNEL=avx2 requested but AVX2 is unavailable");
                }
                return true;
            case KernelChoice::kAuto:
                return avx2_usable();
        }
        return false;
    }();
    return enabled;
}

}  // namespace

ProjectFn active_project_fn(std::size_t d) {
#ifdef RDEPTH_HAVE_AVX2_KERNEL
    if (d == 2 && use_avx2_d2()) return project_avx2_d2;
#endif
    (void)d;
    return project_scalar;
}

std::string active_kernel_name(std::size_t d) {
#ifdef RDEPTH_HAVE_AVX2_KERNEL
    if (d == 2 && use_avx2_d2()) return "avx2-d2";
#endif
    (void)d;
    return "scalar";
}

}  // namespace rdepth
