#include "rdepth/depth.hpp"

#include <algorithm>
#include <cmath>

#include "rdepth/kernels.hpp"

namespace rdepth {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

void validate_query_point(const PointCloud& cloud, const std::vector<double>& z) {
    if (z.size() != cloud.d()) {
        throw DimensionMismatch("query point dimension does not match the cloud");
    }
    for (double v : z) {
        if (!std::isfinite(v)) throw NonFiniteCoordinate("query point has a non-finite coordinate");
    }
}

void validate_radius(double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw Error("ambiguity radius must be a finite nonnegative number");
    }
}

std::vector<std::uint64_t> first_primes(std::size_t count) {
    std::vector<std::uint64_t> primes;
    primes.reserve(count);
    for (std::uint64_t cand = 2; primes.size() < count; ++cand) {
        bool ok = true;
        for (std::uint64_t p : primes) {
            if (p * p > cand) break;
            if (cand % p == 0) {
                ok = false;
                break;
            }
        }
        if (ok) primes.push_back(cand);
    }
    return primes;
}

double radical_inverse(std::uint64_t index, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double factor = inv;
    double value = 0.0;
    while (index > 0) {
        value += factor * static_cast<double>(index % base);
        index /= base;
        factor *= inv;
    }
    return value;
}

enum class ScanKind { kSup, kInf, kClosedMass };

// Shared direction scan. Values land in per-index slots, so the reduction
// (smallest value, then smallest index) is identical for any thread count.
std::vector<double> scan_values(const PointCloud& cloud, const std::vector<double>& z,
                                double delta, const std::vector<Direction>& directions,
                                int threads, ScanKind kind) {
    validate_query_point(cloud, z);
    validate_radius(delta);
    if (directions.empty()) throw Error("direction set must not be empty");
    const std::size_t n = cloud.n();
    const std::size_t d = cloud.d();
    const ProjectFn project_fn = active_project_fn(d);
    std::vector<double> values(directions.size());
    parallel_for(directions.size(), threads, [&](std::size_t i) {
        thread_local InnerEvaluator ev;
        thread_local std::vector<double> y;
        y.resize(n);
        project_fn(cloud.data(), n, d, z.data(), directions[i].coords().data(), y.data());
        switch (kind) {
            case ScanKind::kSup:
                values[i] = ev.sup(y.data(), n, delta);
                break;
            case ScanKind::kInf:
                values[i] = ev.inf(y.data(), n, delta);
                break;
            case ScanKind::kClosedMass: {
                std::size_t cnt = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (y[j] <= 0.0) ++cnt;
                }
                values[i] = static_cast<double>(cnt) / static_cast<double>(n);
                break;
            }
        }
    });
    return values;
}

DepthResult reduce_min(const std::vector<double>& values,
                       const std::vector<Direction>& directions) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < values[best]) best = i;
    }
    DepthResult res;
    res.depth = values[best];
    res.argmin_direction = directions[best];
    res.evaluations = directions.size();
    res.refined = false;
    return res;
}

DepthResult scan_directions(const PointCloud& cloud, const std::vector<double>& z, double delta,
                            const std::vector<Direction>& directions, int threads,
                            ScanKind kind) {
    return reduce_min(scan_values(cloud, z, delta, directions, threads, kind), directions);
}

Direction rotated_2d(double ux, double uy, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return Direction::unchecked({ux * c - uy * s, ux * s + uy * c});
}

DepthResult tukey_full(const PointCloud& cloud, const std::vector<double>& z,
                       std::size_t n_directions, std::uint64_t seed, int threads) {
    validate_query_point(cloud, z);
    const std::size_t d = cloud.d();
    if (d == 1) {
        return scan_directions(cloud, z, 0.0, direction_grid(1, 2, seed), threads,
                               ScanKind::kClosedMass);
    }
    if (d == 2) {
        const std::vector<Direction> dirs = tukey_critical_directions_2d(cloud, z);
        if (dirs.empty()) {
            // Every point coincides with z: all the mass is in every halfspace.
            DepthResult res;
            res.depth = 1.0;
            res.argmin_direction = Direction::unchecked({1.0, 0.0});
            res.evaluations = 0;
            return res;
        }
        return scan_directions(cloud, z, 0.0, dirs, threads, ScanKind::kClosedMass);
    }
    return scan_directions(cloud, z, 0.0, direction_grid(d, n_directions, seed), threads,
                           ScanKind::kClosedMass);
}

// Gradient with finite-difference fallback; counts objective evaluations.
double angle_gradient(const PointCloud& cloud, const std::vector<double>& z, double delta,
                      double theta, InnerEvaluator& ev, std::vector<double>& y,
                      std::size_t& evals) {
    try {
        return value_gradient_2d(cloud, z, delta, theta);
    } catch (const DegenerateDirection&) {
        const ProjectFn project_fn = active_project_fn(2);
        const double h = 1e-6;
        double v[2];
        for (int side = 0; side < 2; ++side) {
            const double th = theta + (side == 0 ? h : -h);
            const double u[2] = {std::cos(th), std::sin(th)};
            y.resize(cloud.n());
            project_fn(cloud.data(), cloud.n(), 2, z.data(), u, y.data());
            v[side] = ev.sup(y.data(), cloud.n(), delta);
            ++evals;
        }
        return (v[0] - v[1]) / (2.0 * h);
    }
}

std::pair<double, double> refine_impl(const PointCloud& cloud, const std::vector<double>& z,
                                      double delta, double theta0, std::size_t max_iter,
                                      double tol, std::size_t& evals) {
    if (cloud.d() != 2) throw InvalidDimension("angular refinement requires a planar cloud");
    validate_query_point(cloud, z);
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw Error("angular refinement requires a strictly positive radius");
    }
    InnerEvaluator ev;
    std::vector<double> y;
    const ProjectFn project_fn = active_project_fn(2);
    auto value_at = [&](double th) {
        const double u[2] = {std::cos(th), std::sin(th)};
        y.resize(cloud.n());
        project_fn(cloud.data(), cloud.n(), 2, z.data(), u, y.data());
        ++evals;
        return ev.sup(y.data(), cloud.n(), delta);
    };

    double theta = theta0;
    double v = value_at(theta);
    double best_theta = theta;
    double best_v = v;
    double step = 0.05;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        const double g = angle_gradient(cloud, z, delta, theta, ev, y, evals);
        if (!(std::fabs(g) > tol)) break;
        double s = step;
        bool accepted = false;
        double cand = theta, vc = v;
        while (s > 1e-13) {
            cand = theta - s * g;
            vc = value_at(cand);
            if (vc < v) {
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) break;
        theta = cand;
        v = vc;
        if (v < best_v) {
            best_v = v;
            best_theta = theta;
        }
        step = std::min(0.2, 2.0 * s);
    }
    return {best_theta, best_v};
}

}  // namespace

std::vector<Direction> direction_grid(std::size_t d, std::size_t count, std::uint64_t seed) {
    if (d < 1) throw InvalidDimension("directions need dimension at least 1");
    if (count < 1) throw Error("direction count must be at least 1");
    std::vector<Direction> dirs;
    if (d == 1) {
        dirs.push_back(Direction::unchecked({1.0}));
        dirs.push_back(Direction::unchecked({-1.0}));
        return dirs;
    }
    if (d == 2) {
        dirs.reserve(count);
        if (count % 4 == 0) {
            // Build one quarter trigonometrically and fill the rest with
            // exact quarter-turn rotations: axis directions stay exact and
            // doubling the count keeps every existing direction bit-for-bit.
            const std::size_t quarter = count / 4;
            dirs.resize(count, Direction::unchecked({0.0, 0.0}));
            for (std::size_t k = 0; k < quarter; ++k) {
                const double theta = (kTwoPi * static_cast<double>(k)) / static_cast<double>(count);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                dirs[k] = Direction::unchecked({c, s});
                dirs[k + quarter] = Direction::unchecked({-s, c});
                dirs[k + 2 * quarter] = Direction::unchecked({-c, -s});
                dirs[k + 3 * quarter] = Direction::unchecked({s, -c});
            }
        } else {
            for (std::size_t k = 0; k < count; ++k) {
                const double theta = (kTwoPi * static_cast<double>(k)) / static_cast<double>(count);
                dirs.push_back(Direction::unchecked({std::cos(theta), std::sin(theta)}));
            }
        }
        return dirs;
    }
    // d >= 3: shifted low-discrepancy points through the normal quantile,
    // then normalized to the sphere. The shift makes the set seed-dependent
    // while staying fully deterministic.
    const std::vector<std::uint64_t> bases = first_primes(d);
    RandomStream shift_stream = RandomStream(seed).derive(0x5D1EC7A11u);
    std::vector<double> shift(d);
    for (double& v : shift) v = shift_stream.uniform01();
    dirs.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        std::vector<double> u(d);
        double norm_sq = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            double t = radical_inverse(j + 1, bases[k]) + shift[k];
            t -= std::floor(t);
            t = std::min(std::max(t, 1e-15), 1.0 - 1e-15);
            u[k] = normal_quantile(t);
            norm_sq += u[k] * u[k];
        }
        double norm = std::sqrt(norm_sq);
        if (!(norm > 1e-12)) {
            u.assign(d, 0.0);
            u[0] = 1.0;
            norm = 1.0;
        }
        for (double& v : u) v /= norm;
        dirs.push_back(Direction::unchecked(std::move(u)));
    }
    return dirs;
}

DepthResult robust_depth_with_directions(const PointCloud& cloud, const std::vector<double>& z,
                                         double delta, const std::vector<Direction>& directions,
                                         int threads) {
    return scan_directions(cloud, z, delta, directions, threads, ScanKind::kSup);
}

DepthResult lower_depth_with_directions(const PointCloud& cloud, const std::vector<double>& z,
                                        double delta, const std::vector<Direction>& directions,
                                        int threads) {
    return scan_directions(cloud, z, delta, directions, threads, ScanKind::kInf);
}

DepthResult tukey_with_directions(const PointCloud& cloud, const std::vector<double>& z,
                                  const std::vector<Direction>& directions, int threads) {
    return scan_directions(cloud, z, 0.0, directions, threads, ScanKind::kClosedMass);
}

DepthResult robust_depth(const PointCloud& cloud, const DepthQuery& query) {
    validate_query_point(cloud, query.z);
    validate_radius(query.delta);
    if (query.n_directions < 1) throw Error("direction budget must be at least 1");
    if (query.delta == 0.0) {
        return tukey_full(cloud, query.z, query.n_directions, query.seed, query.threads);
    }
    const std::vector<Direction> dirs =
        direction_grid(cloud.d(), query.n_directions, query.seed);
    const std::vector<double> values =
        scan_values(cloud, query.z, query.delta, dirs, query.threads, ScanKind::kSup);
    DepthResult res = reduce_min(values, dirs);
    if (!query.refine || cloud.d() != 2) return res;

    // Polish the five best grid angles by gradient descent.
    std::vector<std::size_t> order(dirs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t top = std::min<std::size_t>(5, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top),
                      order.end(), [&](std::size_t a, std::size_t b) {
                          if (values[a] != values[b]) return values[a] < values[b];
                          return a < b;
                      });
    std::size_t refine_evals = 0;
    double best_v = res.depth;
    double best_theta = 0.0;
    bool improved = false;
    for (std::size_t rank = 0; rank < top; ++rank) {
        const Direction& u = dirs[order[rank]];
        const double theta0 = std::atan2(u[1], u[0]);
        const auto [theta, v] =
            refine_impl(cloud, query.z, query.delta, theta0, 100, 1e-8, refine_evals);
        if (v < best_v) {
            best_v = v;
            best_theta = theta;
            improved = true;
        }
    }
    res.evaluations = dirs.size() + refine_evals;
    res.refined = true;
    if (improved) {
        res.depth = best_v;
        res.argmin_direction =
            Direction::unchecked({std::cos(best_theta), std::sin(best_theta)});
    }
    return res;
}

DepthResult lower_depth(const PointCloud& cloud, const DepthQuery& query) {
    validate_query_point(cloud, query.z);
    validate_radius(query.delta);
    if (query.n_directions < 1) throw Error("direction budget must be at least 1");
    const std::vector<Direction> dirs =
        direction_grid(cloud.d(), query.n_directions, query.seed);
    return scan_directions(cloud, query.z, query.delta, dirs, query.threads, ScanKind::kInf);
}

std::vector<Direction> tukey_critical_directions_2d(const PointCloud& cloud,
                                                    const std::vector<double>& z) {
    if (cloud.d() != 2) throw InvalidDimension("critical directions require a planar cloud");
    validate_query_point(cloud, z);
    std::vector<Direction> dirs;
    dirs.reserve(cloud.n() * 6);
    for (std::size_t i = 0; i < cloud.n(); ++i) {
        const double vx = cloud.coord(i, 0) - z[0];
        const double vy = cloud.coord(i, 1) - z[1];
        if (vx == 0.0 && vy == 0.0) continue;
        const double norm = std::hypot(vx, vy);
        const double wx = -vy / norm;
        const double wy = vx / norm;
        dirs.push_back(Direction::unchecked({wx, wy}));
        dirs.push_back(rotated_2d(wx, wy, 1e-9));
        dirs.push_back(rotated_2d(wx, wy, -1e-9));
        dirs.push_back(Direction::unchecked({-wx, -wy}));
        dirs.push_back(rotated_2d(-wx, -wy, 1e-9));
        dirs.push_back(rotated_2d(-wx, -wy, -1e-9));
    }
    return dirs;
}

double tukey_depth(const PointCloud& cloud, const std::vector<double>& z,
                   std::size_t n_directions, std::uint64_t seed) {
    return tukey_full(cloud, z, n_directions, seed, 1).depth;
}

double value_gradient_2d(const PointCloud& cloud, const std::vector<double>& z, double delta,
                         double theta) {
    if (cloud.d() != 2) throw InvalidDimension("angular gradient requires a planar cloud");
    validate_query_point(cloud, z);
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw Error("angular gradient requires a strictly positive radius");
    }
    const double tol = 1e-9;
    const std::size_t n = cloud.n();
    const double u[2] = {std::cos(theta), std::sin(theta)};
    const double du[2] = {-std::sin(theta), std::cos(theta)};
    std::vector<double> y(n);
    active_project_fn(2)(cloud.data(), n, 2, z.data(), u, y.data());

    // Pair positive projections with their angular derivatives.
    std::vector<std::pair<double, double>> pos;
    pos.reserve(n);
    double largest_nonpos = -HUGE_VAL;
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] > 0.0) {
            const double dy =
                du[0] * (z[0] - cloud.coord(i, 0)) + du[1] * (z[1] - cloud.coord(i, 1));
            pos.emplace_back(y[i], dy);
        } else {
            largest_nonpos = std::max(largest_nonpos, y[i]);
        }
    }
    const std::size_t m = pos.size();
    if (m == 0) return 0.0;  // value is pinned at 1: flat
    std::sort(pos.begin(), pos.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> prefix(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + pos[i].first;
    const double nn = static_cast<double>(n);
    const double dn = delta * nn;
    if (prefix[m] < dn - tol) return 0.0;  // deep in the value-1 plateau
    if (std::fabs(prefix[m] - dn) <= tol) {
        throw DegenerateDirection("budget coincides with the total positive mass");
    }
    std::size_t k = 1;
    while (prefix[k] < dn) ++k;
    if (dn - prefix[k - 1] <= tol || prefix[k] - dn <= tol) {
        throw DegenerateDirection("budget lands on a prefix sum");
    }
    if (m < n && largest_nonpos > -tol) {
        throw DegenerateDirection("a projection sits on the halfspace boundary");
    }
    const double yk = pos[k - 1].first;
    if (k == 1) {
        if (yk <= tol) throw DegenerateDirection("smallest positive projection is near zero");
    } else if (yk - pos[k - 2].first <= tol) {
        throw DegenerateDirection("tied sorted projections at the crossing");
    }
    if (k < m && pos[k].first - yk <= tol) {
        throw DegenerateDirection("tied sorted projections at the crossing");
    }
    const double v = static_cast<double>(n - m) / nn + static_cast<double>(k - 1) / nn +
                     (delta - prefix[k - 1] / nn) / yk;
    double sum_dy = 0.0;
    for (std::size_t j = 0; j + 1 < k; ++j) sum_dy += pos[j].second;
    const double coeff = v - static_cast<double>(n - m + k - 1) / nn;
    return -(sum_dy / nn + coeff * pos[k - 1].second) / yk;
}

std::pair<double, double> refine_direction_2d(const PointCloud& cloud,
                                              const std::vector<double>& z, double delta,
                                              double theta0, std::size_t max_iter, double tol) {
    std::size_t evals = 0;
    return refine_impl(cloud, z, delta, theta0, max_iter, tol, evals);
}

MaxDepthResult max_depth(const PointCloud& cloud, double delta, const MaxDepthOptions& options) {
    validate_radius(delta);
    const std::size_t d = cloud.d();
    const std::size_t n = cloud.n();

    // Coordinate-wise median start.
    std::vector<double> median(d);
    {
        std::vector<double> col(n);
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t i = 0; i < n; ++i) col[i] = cloud.coord(i, k);
            const std::size_t mid = n / 2;
            std::nth_element(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(mid),
                             col.end());
            median[k] = col[mid];
        }
    }
    double rms = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double diff = cloud.coord(i, k) - median[k];
            sq += diff * diff;
        }
        rms += sq;
    }
    rms = std::sqrt(rms / static_cast<double>(n));
    if (rms == 0.0) {
        // All points coincide: that point has full depth at any radius.
        MaxDepthResult res;
        res.alpha_bar = 1.0;
        res.argmax_z = median;
        res.evaluations = 0;
        return res;
    }

    const std::vector<Direction> dirs = direction_grid(d, options.n_directions, options.seed);
    InnerEvaluator ev;
    std::vector<double> y(n);
    const ProjectFn project_fn = active_project_fn(d);
    std::size_t evals = 0;
    std::vector<double> best_z = median;
    double best_depth = -1.0;
    auto depth_at = [&](const std::vector<double>& z) {
        double best = HUGE_VAL;
        for (const Direction& u : dirs) {
            project_fn(cloud.data(), n, d, z.data(), u.coords().data(), y.data());
            double v;
            if (delta == 0.0) {
                std::size_t cnt = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (y[j] <= 0.0) ++cnt;
                }
                v = static_cast<double>(cnt) / static_cast<double>(n);
            } else {
                v = ev.sup(y.data(), n, delta);
            }
            best = std::min(best, v);
        }
        ++evals;
        if (best > best_depth) {
            best_depth = best;
            best_z = z;
        }
        return best;
    };

    const double pert = 0.25 * rms;
    std::vector<std::vector<double>> starts;
    starts.push_back(median);
    if (d == 2) {
        for (int j = 0; j < 8; ++j) {
            const double ang = kTwoPi * j / 8.0;
            starts.push_back({median[0] + pert * std::cos(ang), median[1] + pert * std::sin(ang)});
        }
    } else {
        const std::size_t axes = std::min<std::size_t>(d, 4);
        for (std::size_t k = 0; k < axes; ++k) {
            for (double sign : {1.0, -1.0}) {
                std::vector<double> s = median;
                s[k] += sign * pert;
                starts.push_back(std::move(s));
            }
        }
    }
    if (starts.size() > options.starts) starts.resize(options.starts);

    // Nelder-Mead on f(z) = -depth(z) per start; the global best over every
    // evaluated point is retained.
    const double h0 = std::max(0.5 * pert, 1e-6 * (1.0 + rms));
    for (const auto& start : starts) {
        std::vector<std::vector<double>> simplex;
        std::vector<double> f;
        simplex.push_back(start);
        f.push_back(-depth_at(start));
        for (std::size_t k = 0; k < d; ++k) {
            std::vector<double> v = start;
            v[k] += h0;
            simplex.push_back(v);
            f.push_back(-depth_at(v));
        }
        for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
            // Order vertices by objective.
            std::vector<std::size_t> idx(simplex.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            std::sort(idx.begin(), idx.end(),
                      [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
            if (f[idx.back()] - f[idx.front()] <= options.tol) break;
            const std::size_t worst = idx.back();
            std::vector<double> centroid(d, 0.0);
            for (std::size_t i : idx) {
                if (i == worst) continue;
                for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k];
            }
            for (double& c : centroid) c /= static_cast<double>(d);
            auto blend = [&](double w) {
                std::vector<double> v(d);
                for (std::size_t k = 0; k < d; ++k) {
                    v[k] = centroid[k] + w * (centroid[k] - simplex[worst][k]);
                }
                return v;
            };
            const std::vector<double> refl = blend(1.0);
            const double f_refl = -depth_at(refl);
            if (f_refl < f[idx.front()]) {
                const std::vector<double> expa = blend(2.0);
                const double f_expa = -depth_at(expa);
                if (f_expa < f_refl) {
                    simplex[worst] = expa;
                    f[worst] = f_expa;
                } else {
                    simplex[worst] = refl;
                    f[worst] = f_refl;
                }
            } else if (f_refl < f[idx[idx.size() - 2]]) {
                simplex[worst] = refl;
                f[worst] = f_refl;
            } else {
                const std::vector<double> contr = blend(-0.5);
                const double f_contr = -depth_at(contr);
                if (f_contr < f[worst]) {
                    simplex[worst] = contr;
                    f[worst] = f_contr;
                } else {
                    // Shrink toward the best vertex.
                    for (std::size_t i = 0; i < simplex.size(); ++i) {
                        if (i == idx.front()) continue;
                        for (std::size_t k = 0; k < d; ++k) {
                            simplex[i][k] =
                                0.5 * (simplex[i][k] + simplex[idx.front()][k]);
                        }
                        f[i] = -depth_at(simplex[i]);
                    }
                }
            }
        }
    }

    MaxDepthResult res;
    res.alpha_bar = best_depth;
    res.argmax_z = best_z;
    res.evaluations = evals;
    return res;
}

double alpha_star(double delta, const std::function<double(double)>& alpha_bar_fn) {
    validate_radius(delta);
    auto checked = [&](double x) {
        const double v = alpha_bar_fn(x);
        if (!(v > 0.0) || !(v <= 1.0)) {
            throw InvalidAlphaBar("maximal-depth values must lie in (0, 1]");
        }
        return v;
    };
    if (checked(2.0 * delta) == 1.0) return 0.5;
    double lo = 0.0;
    double hi = 0.5;
    // g(a) = a/(1-a) - fn(delta/(1-a)); g(0+) < 0, g(1/2) > 0.
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double g = mid / (1.0 - mid) - checked(delta / (1.0 - mid));
        if (g < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace rdepth
