#include "rdepth/inner.hpp"

#include <algorithm>
#include <cmath>

#include "rdepth/kernels.hpp"

namespace rdepth {

namespace {

void validate_delta(double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw Error("ambiguity radius must be a finite nonnegative number");
    }
}

// Shared solver core for the closed-side supremum. `pos` must contain the
// ascending positive projections in [0, k_avail) and prefix_or_null either
// null (sums are accumulated on the fly) or the full prefix-sum array.
// Kept as one function so the profile-based and scratch-buffer paths
// produce bitwise identical results.
double sup_from_sorted(const double* pos, std::size_t m, double p, double delta,
                       std::size_t n) {
    const double nn = static_cast<double>(n);
    const double dn = delta * nn;
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) total += pos[j];
    if (total <= dn) return 1.0;
    double s_prev = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
        const double s = s_prev + pos[k - 1];
        if (s >= dn) {
            return p + static_cast<double>(k - 1) / nn + (delta - s_prev / nn) / pos[k - 1];
        }
        s_prev = s;
    }
    return 1.0;  // not reachable: total > dn implies the scan triggers
}

// Open-side infimum over ascending magnitudes of the strictly negative
// projections; q is the strictly-negative fraction.
double inf_from_sorted(const double* mag, std::size_t neg, double q, double delta,
                       std::size_t n) {
    const double nn = static_cast<double>(n);
    const double dn = delta * nn;
    double total = 0.0;
    for (std::size_t j = 0; j < neg; ++j) total += mag[j];
    if (total <= dn) return 0.0;
    double s_prev = 0.0;
    for (std::size_t k = 1; k <= neg; ++k) {
        const double s = s_prev + mag[k - 1];
        if (s >= dn) {
            const double v =
                q - static_cast<double>(k - 1) / nn - (delta - s_prev / nn) / mag[k - 1];
            return v > 0.0 ? v : 0.0;
        }
        s_prev = s;
    }
    return 0.0;  // not reachable
}

}  // namespace

ProjectionProfile make_profile(std::vector<double> y) {
    if (y.empty()) {
        throw EmptyInput("projection profile needs at least one value");
    }
    ProjectionProfile prof;
    prof.n = y.size();
    for (double v : y) {
        if (!std::isfinite(v)) {
            throw NonFiniteCoordinate("projection profile has a non-finite value");
        }
        if (v > 0.0) {
            prof.sorted_pos.push_back(v);
        } else if (v < 0.0) {
            prof.neg_mag.push_back(-v);
        }
    }
    prof.y = std::move(y);
    prof.m = prof.sorted_pos.size();
    prof.neg = prof.neg_mag.size();
    prof.p = static_cast<double>(prof.n - prof.m) / static_cast<double>(prof.n);
    std::sort(prof.sorted_pos.begin(), prof.sorted_pos.end());
    std::sort(prof.neg_mag.begin(), prof.neg_mag.end());
    prof.prefix.resize(prof.m + 1);
    prof.prefix[0] = 0.0;
    for (std::size_t i = 0; i < prof.m; ++i) {
        prof.prefix[i + 1] = prof.prefix[i] + prof.sorted_pos[i];
    }
    prof.neg_prefix.resize(prof.neg + 1);
    prof.neg_prefix[0] = 0.0;
    for (std::size_t i = 0; i < prof.neg; ++i) {
        prof.neg_prefix[i + 1] = prof.neg_prefix[i] + prof.neg_mag[i];
    }
    return prof;
}

ProjectionProfile project(const PointCloud& cloud, const std::vector<double>& z,
                          const Direction& u) {
    if (z.size() != cloud.d() || u.d() != cloud.d()) {
        throw DimensionMismatch("query point, direction and cloud dimensions must agree");
    }
    std::vector<double> y(cloud.n());
    active_project_fn(cloud.d())(cloud.data(), cloud.n(), cloud.d(), z.data(),
                                 u.coords().data(), y.data());
    return make_profile(std::move(y));
}

double worst_case_sup(const ProjectionProfile& profile, double delta) {
    validate_delta(delta);
    if (delta == 0.0) return profile.p;
    if (profile.m == 0) return 1.0;
    return sup_from_sorted(profile.sorted_pos.data(), profile.m, profile.p, delta, profile.n);
}

double worst_case_inf(const ProjectionProfile& profile, double delta) {
    validate_delta(delta);
    const double q =
        static_cast<double>(profile.neg) / static_cast<double>(profile.n);
    if (delta == 0.0) return q;
    if (profile.neg == 0) return 0.0;
    return inf_from_sorted(profile.neg_mag.data(), profile.neg, q, delta, profile.n);
}

double worst_case_sup_dual(const ProjectionProfile& profile, double delta,
                           std::size_t grid_size) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw Error("dual oracle requires a strictly positive finite radius");
    }
    if (grid_size < 100) {
        throw Error("dual oracle grid must have at least 100 points");
    }
    const double nn = static_cast<double>(profile.n);
    auto objective = [&](double lambda) {
        double acc = 0.0;
        for (double v : profile.y) {
            const double pos = v > 0.0 ? v : 0.0;
            const double term = 1.0 - pos / lambda;
            if (term > 0.0) acc += term;
        }
        return delta / lambda + acc / nn;
    };

    std::vector<double> grid;
    grid.reserve(profile.m + grid_size + 1);
    for (double v : profile.sorted_pos) grid.push_back(v);
    if (profile.m > 0) {
        const double lo = profile.sorted_pos.front();
        const double hi = profile.sorted_pos.back();
        if (hi > lo) {
            const double llo = std::log(lo);
            const double lhi = std::log(hi);
            for (std::size_t j = 0; j < grid_size; ++j) {
                const double t = static_cast<double>(j) / static_cast<double>(grid_size - 1);
                grid.push_back(std::exp(llo + t * (lhi - llo)));
            }
        }
    }
    double scale = std::max(1.0, delta);
    if (profile.m > 0) scale = std::max(scale, profile.sorted_pos.back());
    grid.push_back(scale * 1e12);

    double best = HUGE_VAL;
    for (double lambda : grid) {
        best = std::min(best, objective(lambda));
    }
    return best;
}

TruncatedMeanInverse truncated_mean_inverse(const ProjectionProfile& profile, double delta) {
    validate_delta(delta);
    TruncatedMeanInverse out;
    if (delta == 0.0) {
        out.lambda = 0.0;
        return out;
    }
    const double dn = delta * static_cast<double>(profile.n);
    if (profile.m == 0 || profile.prefix[profile.m] <= dn) {
        out.lambda = HUGE_VAL;
        return out;
    }
    const auto it = std::lower_bound(profile.prefix.begin() + 1, profile.prefix.end(), dn);
    const std::size_t k = static_cast<std::size_t>(it - profile.prefix.begin());
    out.lambda = profile.sorted_pos[k - 1];
    return out;
}

double normal_inner_sup(double norm_z, double delta) {
    validate_delta(delta);
    if (!(norm_z >= 0.0) || !std::isfinite(norm_z)) {
        throw Error("distance from the mean must be a finite nonnegative number");
    }
    // Full positive-part mean E(a + Z)^+ = a Phi(a) + phi(a).
    const double full = norm_z * normal_cdf(norm_z) + normal_pdf(norm_z);
    if (delta >= full) return 1.0;
    if (delta == 0.0) return normal_cdf(-norm_z);
    // Transported mass up to level lambda:
    //   h(lambda) = phi(a) - phi(lambda - a) + a (Phi(lambda - a) - Phi(-a)),
    // increasing from 0 to `full`; solve h(lambda) = delta.
    const double a = norm_z;
    auto h = [&](double lambda) {
        return normal_pdf(a) - normal_pdf(lambda - a) +
               a * (normal_cdf(lambda - a) - normal_cdf(-a));
    };
    double lo = 0.0;
    double hi = a + 40.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) < delta) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return normal_cdf(0.5 * (lo + hi) - a);
}

double InnerEvaluator::sup(const double* y, std::size_t n, double delta) {
    validate_delta(delta);
    if (n == 0) throw EmptyInput("projection buffer is empty");
    buf_.clear();
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] > 0.0) buf_.push_back(y[i]);
    }
    const std::size_t m = buf_.size();
    const double p = static_cast<double>(n - m) / static_cast<double>(n);
    if (delta == 0.0) return p;
    if (m == 0) return 1.0;
    const double dn = delta * static_cast<double>(n);
    // Only the smallest positives up to the budget crossing matter; select
    // and sort a growing head instead of sorting all of them.
    std::size_t k_sorted = std::min<std::size_t>(m, 64);
    while (true) {
        if (k_sorted < m) {
            std::nth_element(buf_.begin(),
                             buf_.begin() + static_cast<std::ptrdiff_t>(k_sorted), buf_.end());
        }
        std::sort(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(k_sorted));
        if (k_sorted == m) {
            return sup_from_sorted(buf_.data(), m, p, delta, n);
        }
        // Accept the head only when the budget crossing happens strictly
        // before its last element: then the untouched tail (all positive)
        // cannot change the total-versus-budget comparison either.
        double s = 0.0;
        bool interior_cross = false;
        for (std::size_t j = 0; j + 1 < k_sorted; ++j) {
            s += buf_[j];
            if (s >= dn) {
                interior_cross = true;
                break;
            }
        }
        if (interior_cross) {
            return sup_from_sorted(buf_.data(), k_sorted, p, delta, n);
        }
        k_sorted = std::min(m, k_sorted * 4);
    }
}

double InnerEvaluator::inf(const double* y, std::size_t n, double delta) {
    validate_delta(delta);
    if (n == 0) throw EmptyInput("projection buffer is empty");
    buf_.clear();
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] < 0.0) buf_.push_back(-y[i]);
    }
    const std::size_t neg = buf_.size();
    const double q = static_cast<double>(neg) / static_cast<double>(n);
    if (delta == 0.0) return q;
    if (neg == 0) return 0.0;
    const double dn = delta * static_cast<double>(n);
    std::size_t k_sorted = std::min<std::size_t>(neg, 64);
    while (true) {
        if (k_sorted < neg) {
            std::nth_element(buf_.begin(),
                             buf_.begin() + static_cast<std::ptrdiff_t>(k_sorted), buf_.end());
        }
        std::sort(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(k_sorted));
        if (k_sorted == neg) {
            return inf_from_sorted(buf_.data(), neg, q, delta, n);
        }
        double s = 0.0;
        bool interior_cross = false;
        for (std::size_t j = 0; j + 1 < k_sorted; ++j) {
            s += buf_[j];
            if (s >= dn) {
                interior_cross = true;
                break;
            }
        }
        if (interior_cross) {
            return inf_from_sorted(buf_.data(), k_sorted, q, delta, n);
        }
        k_sorted = std::min(neg, k_sorted * 4);
    }
}

}  // namespace rdepth
