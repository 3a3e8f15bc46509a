#pragma once

// Planar convex-hull machinery, distance to the hull, the exact far-field
// depth formula, and contour tracing of depth upper level sets.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "rdepth/core.hpp"

namespace rdepth {

class CenterTooShallow : public Error {
public:
    using Error::Error;
};

// Counterclockwise sequence of extreme points. Degenerate clouds give a
// 2-vertex segment or a 1-vertex point polygon.
struct HullPolygon {
    std::vector<std::array<double, 2>> vertices;
};

// Closed polyline approximating {z : depth(z) = alpha}; the closing edge
// from the last vertex back to the first is implicit.
struct ContourPolyline {
    double alpha = 0.0;
    std::vector<std::array<double, 2>> points;
};

enum class ContourMode { kRobust, kLower };

// Andrew monotone-chain hull of a planar cloud.
HullPolygon convex_hull_2d(const PointCloud& cloud);

// Euclidean distance from z to the hull; 0 inside or on the boundary.
double dist_to_hull(const std::vector<double>& z, const HullPolygon& hull);

// Largest pairwise vertex distance (0 for a point polygon).
double hull_diameter(const HullPolygon& hull);

// Boundary of the hull offset outward by radius r, with vertex corners
// rounded at `segments_per_turn` segments per full circle.
std::vector<std::array<double, 2>> offset_hull_polyline(const HullPolygon& hull, double r,
                                                        std::size_t segments_per_turn = 64);

// Exact far-field depth: delta / dist(z, hull) whenever dist(z, hull) is at
// least delta * n; empty when z is too close for the formula to apply.
std::optional<double> outer_depth(const std::vector<double>& z, const HullPolygon& hull,
                                  double delta, std::size_t n);

// Trace the level-alpha contour by radial bisection from a strictly deeper
// center point (|depth - alpha| <= 1e-4 per vertex, one vertex per ray,
// ordered by ray index). Far-out robust levels alpha <= 1/n are emitted
// exactly as the delta/alpha offset of the hull instead.
ContourPolyline contour_2d(const PointCloud& cloud, double delta, double alpha,
                           const std::vector<double>& center, std::size_t n_rays,
                           ContourMode mode = ContourMode::kRobust,
                           std::size_t n_directions = 1000, int threads = 1);

}  // namespace rdepth
