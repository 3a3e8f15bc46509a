#include "rdepth/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "rdepth/depth.hpp"

namespace rdepth {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
             const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double dist_point_segment(double px, double py, const std::array<double, 2>& a,
                          const std::array<double, 2>& b) {
    const double ex = b[0] - a[0];
    const double ey = b[1] - a[1];
    const double len_sq = ex * ex + ey * ey;
    double t = 0.0;
    if (len_sq > 0.0) {
        t = ((px - a[0]) * ex + (py - a[1]) * ey) / len_sq;
        t = std::min(1.0, std::max(0.0, t));
    }
    return std::hypot(px - (a[0] + t * ex), py - (a[1] + t * ey));
}

void validate_planar_point(const std::vector<double>& z) {
    if (z.size() != 2) throw DimensionMismatch("expected a planar point");
    if (!std::isfinite(z[0]) || !std::isfinite(z[1])) {
        throw NonFiniteCoordinate("point has a non-finite coordinate");
    }
}

}  // namespace

HullPolygon convex_hull_2d(const PointCloud& cloud) {
    if (cloud.d() != 2) throw InvalidDimension("convex hull requires a planar cloud");
    std::vector<std::array<double, 2>> pts;
    pts.reserve(cloud.n());
    for (std::size_t i = 0; i < cloud.n(); ++i) {
        pts.push_back({cloud.coord(i, 0), cloud.coord(i, 1)});
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    HullPolygon hull;
    if (pts.size() <= 2) {
        hull.vertices = std::move(pts);
        return hull;
    }
    // Monotone chain with strict turns: collinear midpoints are dropped, so
    // fully collinear clouds collapse to their two extremes.
    std::vector<std::array<double, 2>> chain(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(chain[k - 2], chain[k - 1], p) <= 0.0) --k;
        chain[k++] = p;
    }
    const std::size_t lower_end = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        const auto& p = pts[i];
        while (k >= lower_end && cross(chain[k - 2], chain[k - 1], p) <= 0.0) --k;
        chain[k++] = p;
    }
    chain.resize(k - 1);  // last point repeats the first
    hull.vertices = std::move(chain);
    return hull;
}

double dist_to_hull(const std::vector<double>& z, const HullPolygon& hull) {
    validate_planar_point(z);
    const auto& v = hull.vertices;
    if (v.empty()) throw Error("hull has no vertices");
    if (v.size() == 1) return std::hypot(z[0] - v[0][0], z[1] - v[0][1]);
    if (v.size() == 2) return dist_point_segment(z[0], z[1], v[0], v[1]);
    bool inside = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        if (cross(a, b, {z[0], z[1]}) < 0.0) {
            inside = false;
            break;
        }
    }
    if (inside) return 0.0;
    double best = HUGE_VAL;
    for (std::size_t i = 0; i < v.size(); ++i) {
        best = std::min(best, dist_point_segment(z[0], z[1], v[i], v[(i + 1) % v.size()]));
    }
    return best;
}

double hull_diameter(const HullPolygon& hull) {
    const auto& v = hull.vertices;
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            best = std::max(best, std::hypot(v[i][0] - v[j][0], v[i][1] - v[j][1]));
        }
    }
    return best;
}

std::vector<std::array<double, 2>> offset_hull_polyline(const HullPolygon& hull, double r,
                                                        std::size_t segments_per_turn) {
    if (!(r > 0.0) || !std::isfinite(r)) throw Error("offset radius must be positive");
    if (segments_per_turn < 4) throw Error("need at least 4 segments per turn");
    const auto& v = hull.vertices;
    if (v.empty()) throw Error("hull has no vertices");
    std::vector<std::array<double, 2>> out;
    if (v.size() == 1) {
        for (std::size_t j = 0; j < segments_per_turn; ++j) {
            const double phi = kTwoPi * static_cast<double>(j) /
                               static_cast<double>(segments_per_turn);
            out.push_back({v[0][0] + r * std::cos(phi), v[0][1] + r * std::sin(phi)});
        }
        return out;
    }
    // Each vertex contributes a rounded arc from the incoming edge normal to
    // the outgoing edge normal; the straight edge to the next vertex is the
    // segment between consecutive arcs.
    const std::size_t m = v.size();
    std::vector<double> normal_angle(m);  // outward normal of edge i -> i+1
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % m];
        normal_angle[i] = std::atan2(a[0] - b[0], b[1] - a[1]);  // (dy, -dx) direction
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double from = normal_angle[(i + m - 1) % m];
        double turn = normal_angle[i] - from;
        while (turn < 0.0) turn += kTwoPi;
        while (turn >= kTwoPi) turn -= kTwoPi;
        const std::size_t steps = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::ceil(turn / (kTwoPi / static_cast<double>(segments_per_turn)))));
        for (std::size_t j = 0; j <= steps; ++j) {
            const double phi = from + turn * static_cast<double>(j) / static_cast<double>(steps);
            out.push_back({v[i][0] + r * std::cos(phi), v[i][1] + r * std::sin(phi)});
        }
    }
    return out;
}

std::optional<double> outer_depth(const std::vector<double>& z, const HullPolygon& hull,
                                  double delta, std::size_t n) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw Error("far-field formula requires a strictly positive radius");
    }
    if (n < 1) throw EmptyInput("cloud size must be positive");
    const double dist = dist_to_hull(z, hull);
    if (dist >= delta * static_cast<double>(n)) return delta / dist;
    return std::nullopt;
}

ContourPolyline contour_2d(const PointCloud& cloud, double delta, double alpha,
                           const std::vector<double>& center, std::size_t n_rays,
                           ContourMode mode, std::size_t n_directions, int threads) {
    if (cloud.d() != 2) throw InvalidDimension("contours require a planar cloud");
    validate_planar_point(center);
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw Error("contour level must lie in (0, 1)");
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw Error("ambiguity radius must be a finite nonnegative number");
    }
    if (n_rays < 3) throw Error("need at least 3 rays");
    const std::size_t n = cloud.n();
    const std::vector<Direction> dirs = direction_grid(2, n_directions, 0);
    auto depth_at = [&](const std::vector<double>& z) {
        return mode == ContourMode::kRobust
                   ? robust_depth_with_directions(cloud, z, delta, dirs, 1).depth
                   : lower_depth_with_directions(cloud, z, delta, dirs, 1).depth;
    };
    const double center_depth = depth_at(center);
    if (center_depth <= alpha) {
        throw CenterTooShallow("center depth does not exceed the requested level");
    }

    ContourPolyline contour;
    contour.alpha = alpha;
    const HullPolygon hull = convex_hull_2d(cloud);
    if (mode == ContourMode::kRobust && delta > 0.0 &&
        alpha <= 1.0 / static_cast<double>(n)) {
        // Far-out level sets are exactly the hull offset by delta/alpha.
        contour.points = offset_hull_polyline(hull, delta / alpha);
        return contour;
    }

    const double d_max =
        hull_diameter(hull) + (delta > 0.0 ? delta * static_cast<double>(n) / alpha : 0.0) + 1.0;
    contour.points.resize(n_rays);
    std::vector<int> failed(n_rays, 0);
    parallel_for(n_rays, threads, [&](std::size_t j) {
        const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(n_rays);
        const double ux = std::cos(theta);
        const double uy = std::sin(theta);
        double lo = 0.0;
        double hi = d_max;
        bool ok = false;
        std::vector<double> z(2);
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            z[0] = center[0] + mid * ux;
            z[1] = center[1] + mid * uy;
            const double v = depth_at(z);
            if (std::fabs(v - alpha) <= 1e-4) {
                ok = true;
                break;
            }
            if (v > alpha) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if (!ok) {
            failed[j] = 1;
            return;
        }
        contour.points[j] = {z[0], z[1]};
    });
    for (int f : failed) {
        if (f) throw Error("contour bisection did not reach the level tolerance");
    }
    return contour;
}

}  // namespace rdepth
