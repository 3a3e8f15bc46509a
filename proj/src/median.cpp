#include "rdepth/median.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rdepth {

namespace {

constexpr double kPi = 3.141592653589793238462643;
constexpr double kHalfPi = 1.570796326794896619231322;
constexpr double kTwoPi = 6.283185307179586476925287;

struct SweepEvent {
    double angle;
    int type;  // 0 = leave, 1 = enter (leaves first within a batch)
    std::size_t idx;
};

// Rotating open-halfplane sweep over nonzero offset vectors: point i is
// active at angle theta iff <u(theta), v_i> > 0, i.e. theta lies within a
// quarter turn of v_i's own angle. The callback sees every window (active
// flags plus running sum) at least once: the state between each event batch
// and the intermediate state after a batch's departures.
template <typename Callback>
void sweep_windows(const std::vector<std::array<double, 2>>& v, Callback&& record) {
    const std::size_t m = v.size();
    if (m == 0) return;
    std::vector<double> phi(m);
    std::vector<SweepEvent> events;
    events.reserve(2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        phi[i] = std::atan2(v[i][1], v[i][0]);
        double enter = phi[i] - kHalfPi;
        double leave = phi[i] + kHalfPi;
        if (enter < 0.0) enter += kTwoPi;
        if (leave < 0.0) leave += kTwoPi;
        if (leave >= kTwoPi) leave -= kTwoPi;
        events.push_back({leave, 0, i});
        events.push_back({enter, 1, i});
    }
    std::sort(events.begin(), events.end(), [](const SweepEvent& a, const SweepEvent& b) {
        if (a.angle != b.angle) return a.angle < b.angle;
        if (a.type != b.type) return a.type < b.type;
        return a.idx < b.idx;
    });

    // Start in the middle of the widest angular gap between event batches,
    // where no projection sits near the halfplane boundary.
    double best_gap = -1.0;
    double theta_start = 0.0;
    for (std::size_t k = 0; k < events.size(); ++k) {
        const double a = events[k].angle;
        const double b =
            k + 1 < events.size() ? events[k + 1].angle : events[0].angle + kTwoPi;
        if (b - a > best_gap) {
            best_gap = b - a;
            theta_start = 0.5 * (a + b);
        }
    }
    std::vector<char> active(m, 0);
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (std::fabs(std::remainder(theta_start - phi[i], kTwoPi)) < kHalfPi) {
            active[i] = 1;
            sx += v[i][0];
            sy += v[i][1];
        }
    }
    record(active, sx, sy);

    std::size_t start = 0;
    while (start < events.size() && events[start].angle <= theta_start) ++start;
    start %= events.size();
    std::size_t k = 0;
    while (k < events.size()) {
        // Batch of events sharing one angle (runs never straddle the wrap).
        const double angle = events[(start + k) % events.size()].angle;
        std::size_t end = k;
        while (end < events.size() && events[(start + end) % events.size()].angle == angle) {
            ++end;
        }
        for (std::size_t j = k; j < end; ++j) {
            const SweepEvent& e = events[(start + j) % events.size()];
            if (e.type == 0 && active[e.idx]) {
                active[e.idx] = 0;
                sx -= v[e.idx][0];
                sy -= v[e.idx][1];
            }
        }
        record(active, sx, sy);
        for (std::size_t j = k; j < end; ++j) {
            const SweepEvent& e = events[(start + j) % events.size()];
            if (e.type == 1 && !active[e.idx]) {
                active[e.idx] = 1;
                sx += v[e.idx][0];
                sy += v[e.idx][1];
            }
        }
        record(active, sx, sy);
        k = end;
    }
}

// Nonzero offsets x_i - z paired with their original cloud indices.
std::pair<std::vector<std::array<double, 2>>, std::vector<std::size_t>> offsets(
    const PointCloud& cloud, const std::vector<double>& z) {
    if (cloud.d() != 2) throw InvalidDimension("planar sweep requires d = 2");
    if (z.size() != 2) throw DimensionMismatch("expected a planar point");
    if (!std::isfinite(z[0]) || !std::isfinite(z[1])) {
        throw NonFiniteCoordinate("point has a non-finite coordinate");
    }
    std::vector<std::array<double, 2>> v;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < cloud.n(); ++i) {
        const double vx = cloud.coord(i, 0) - z[0];
        const double vy = cloud.coord(i, 1) - z[1];
        if (vx == 0.0 && vy == 0.0) continue;
        v.push_back({vx, vy});
        idx.push_back(i);
    }
    return {std::move(v), std::move(idx)};
}

std::array<double, 2> rotated(double x, double y, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
}

}  // namespace

double min_delta_full_depth_2d(const PointCloud& cloud, const std::vector<double>& z) {
    const auto [v, idx] = offsets(cloud, z);
    (void)idx;
    double best = 0.0;
    sweep_windows(v, [&](const std::vector<char>&, double sx, double sy) {
        best = std::max(best, std::hypot(sx, sy));
    });
    return best / static_cast<double>(cloud.n());
}

double subset_norm_oracle(const std::vector<std::array<double, 2>>& vs) {
    if (vs.size() > 20) throw TooLarge("exhaustive subset scan is limited to 20 vectors");
    const std::size_t m = vs.size();
    double best = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        double sx = 0.0;
        double sy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask & (std::size_t{1} << i)) {
                sx += vs[i][0];
                sy += vs[i][1];
            }
        }
        best = std::max(best, std::hypot(sx, sy));
    }
    return best;
}

SeparableSubsets enumerate_separable_2d(const PointCloud& cloud) {
    if (cloud.d() != 2) throw InvalidDimension("separable enumeration requires d = 2");
    const std::size_t n = cloud.n();
    std::vector<std::array<double, 2>> dirs = {
        {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double ex = cloud.coord(j, 0) - cloud.coord(i, 0);
            const double ey = cloud.coord(j, 1) - cloud.coord(i, 1);
            if (ex == 0.0 && ey == 0.0) continue;
            // Normals to the connecting line, both orientations, each nudged
            // both ways so the pair's projections split strictly.
            for (double base_x : {-ey, ey}) {
                const double base_y = base_x == -ey ? ex : -ex;
                dirs.push_back(rotated(base_x, base_y, 1e-9));
                dirs.push_back(rotated(base_x, base_y, -1e-9));
            }
        }
    }

    std::set<std::vector<std::size_t>> seen;
    std::vector<std::size_t> full(n);
    for (std::size_t i = 0; i < n; ++i) full[i] = i;
    seen.insert(full);

    std::vector<std::pair<double, std::size_t>> keyed(n);
    for (const auto& u : dirs) {
        for (std::size_t i = 0; i < n; ++i) {
            keyed[i] = {u[0] * cloud.coord(i, 0) + u[1] * cloud.coord(i, 1), i};
        }
        std::sort(keyed.begin(), keyed.end());
        std::vector<std::size_t> prefix;
        prefix.reserve(n);
        for (std::size_t p = 0; p + 1 < n; ++p) {
            prefix.push_back(keyed[p].second);
            // Only cut where the projections genuinely separate.
            if (keyed[p].first < keyed[p + 1].first) {
                std::vector<std::size_t> sorted_prefix = prefix;
                std::sort(sorted_prefix.begin(), sorted_prefix.end());
                seen.insert(std::move(sorted_prefix));
            }
        }
    }

    SeparableSubsets family;
    family.sums.reserve(seen.size());
    family.cardinalities.reserve(seen.size());
    family.index_sets.reserve(seen.size());
    for (const auto& set : seen) {
        double sx = 0.0;
        double sy = 0.0;
        for (std::size_t i : set) {
            sx += cloud.coord(i, 0);
            sy += cloud.coord(i, 1);
        }
        family.sums.push_back({sx, sy});
        family.cardinalities.push_back(set.size());
        family.index_sets.push_back(set);
    }
    return family;
}

BallSystem ball_system(const SeparableSubsets& family, double delta, std::size_t n) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw Error("ball radii require a strictly positive ambiguity radius");
    }
    if (n < 1) throw EmptyInput("cloud size must be positive");
    BallSystem system;
    system.balls.reserve(family.size());
    for (std::size_t k = 0; k < family.size(); ++k) {
        const double card = static_cast<double>(family.cardinalities[k]);
        system.balls.push_back({{family.sums[k][0] / card, family.sums[k][1] / card},
                                delta * static_cast<double>(n) / card});
    }
    return system;
}

bool median_membership(const PointCloud& cloud, const std::vector<double>& z, double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw Error("membership requires a strictly positive ambiguity radius");
    }
    return min_delta_full_depth_2d(cloud, z) <= delta;
}

namespace {

// Count distinct nonempty sweep windows passing a self-consistency check
// against their own sum: members must project strictly positively, and with
// constrain_outsiders the complement must not (the exact fixed point).
std::size_t count_consistent_windows(const PointCloud& cloud, const std::vector<double>& z,
                                     bool constrain_outsiders) {
    const auto [v, idx] = offsets(cloud, z);
    (void)idx;
    std::set<std::vector<std::size_t>> windows;
    sweep_windows(v, [&](const std::vector<char>& active, double, double) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < active.size(); ++i) {
            if (active[i]) members.push_back(i);
        }
        if (!members.empty()) windows.insert(std::move(members));
    });
    std::size_t count = 0;
    for (const auto& members : windows) {
        double sx = 0.0;
        double sy = 0.0;
        for (std::size_t i : members) {
            sx += v[i][0];
            sy += v[i][1];
        }
        bool match = true;
        std::size_t pos = 0;
        for (std::size_t j = 0; j < v.size() && match; ++j) {
            const bool positive = sx * v[j][0] + sy * v[j][1] > 0.0;
            const bool in_window = pos < members.size() && members[pos] == j;
            if (in_window) ++pos;
            if (in_window) {
                match = positive;
            } else if (constrain_outsiders) {
                match = !positive;
            }
        }
        if (match) ++count;
    }
    return count;
}

}  // namespace

std::size_t count_optimal_subsets(const PointCloud& cloud, const std::vector<double>& z) {
    return count_consistent_windows(cloud, z, true);
}

std::size_t count_supported_windows(const PointCloud& cloud, const std::vector<double>& z) {
    return count_consistent_windows(cloud, z, false);
}

}  // namespace rdepth
