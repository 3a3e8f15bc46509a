#pragma once

// Full-depth median region machinery: the minimal radius giving depth one at
// a point (planar rotating-halfplane sweep), an exhaustive subset-norm
// oracle, enumeration of line-separable subsets, ball-intersection
// membership, and the fixed-point subset count.

#include <array>
#include <cstddef>
#include <vector>

#include "rdepth/core.hpp"

namespace rdepth {

class TooLarge : public Error {
public:
    using Error::Error;
};

// Family of index subsets separable from their complement by a line,
// deduplicated; each entry keeps the coordinate sum of its members, the
// member count, and the sorted member indices.
struct SeparableSubsets {
    std::vector<std::array<double, 2>> sums;
    std::vector<std::size_t> cardinalities;
    std::vector<std::vector<std::size_t>> index_sets;

    std::size_t size() const { return index_sets.size(); }
};

struct Ball {
    std::array<double, 2> center;
    double radius;
};

// One ball per separable subset I: center = (sum of members)/|I|, radius =
// delta*n/|I|. A point belongs to the depth-one region iff it lies in every
// ball.
struct BallSystem {
    std::vector<Ball> balls;
};

// Smallest ambiguity radius for which the worst-case depth at z equals one:
// the largest halfplane-window sum norm of v_i = x_i - z over a rotating
// sweep, divided by n. Points coinciding with z contribute nothing.
double min_delta_full_depth_2d(const PointCloud& cloud, const std::vector<double>& z);

// Exhaustive maximum of ||sum over J of v_j|| over all subsets J; only for
// small inputs (throws TooLarge beyond 20 vectors).
double subset_norm_oracle(const std::vector<std::array<double, 2>>& vs);

// All subsets of cloud indices that a line can separate from the rest:
// prefix cuts of the projection order along pair normals (nudged both ways)
// and the axes, deduplicated.
SeparableSubsets enumerate_separable_2d(const PointCloud& cloud);

// Balls of the intersection characterization at the given radius.
BallSystem ball_system(const SeparableSubsets& family, double delta, std::size_t n);

// True iff z lies in the full-depth median region at radius delta.
bool median_membership(const PointCloud& cloud, const std::vector<double>& z, double delta);

// Number of distinct sweep windows I (nonempty) satisfying the fixed point
// I = {j : <sum_{i in I} v_i, v_j> > 0}.
std::size_t count_optimal_subsets(const PointCloud& cloud, const std::vector<double>& z);

// One-sided relaxation of the fixed point: windows whose every member
// projects strictly positively onto the window sum (outsiders unconstrained).
std::size_t count_supported_windows(const PointCloud& cloud, const std::vector<double>& z);

}  // namespace rdepth
