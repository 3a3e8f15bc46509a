// Outer minimization over directions: robust (worst-case) halfspace depth,
// its open-halfspace lower companion, classical Tukey depth, angular
// gradient refinement in the plane, depth maximization over the query
// point, and the level threshold root alpha*.
#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rdepth/core.hpp"
#include "rdepth/inner.hpp"

namespace rdepth {

class DegenerateDirection : public Error {
public:
    explicit DegenerateDirection(const std::string& msg) : Error(msg) {}
};

class InvalidAlphaBar : public Error {
public:
    explicit InvalidAlphaBar(const std::string& msg) : Error(msg) {}
};

struct DepthQuery {
    std::vector<double> z;
    double delta = 0.0;
    std::size_t n_directions = 1000;
    bool refine = false;          // gradient refinement, d = 2 only
    std::uint64_t seed = 0;       // direction sampling seed for d >= 3
    int threads = 1;              // worker bound; results are thread-count invariant
};

struct DepthResult {
    double depth = 0.0;
    Direction argmin_direction = Direction::unchecked({1.0});
    std::size_t evaluations = 0;
    bool refined = false;
};

// Direction grid: d=1 gives {+1,-1}; d=2 gives count angles 2*pi*k/count
// (built by exact quarter-turn rotation when count is divisible by 4, so
// axis directions are exact and doubled counts nest bitwise); d>=3 maps a
// seeded shifted low-discrepancy sequence through the normal quantile and
// normalizes.
std::vector<Direction> direction_grid(std::size_t d, std::size_t count, std::uint64_t seed);

// Minimum over the direction grid of the closed-side worst-case mass; with
// query.refine and d=2, the best five grid directions are polished by
// gradient descent on the angle. delta = 0 falls back to classical Tukey
// depth (exact in d <= 2).
DepthResult robust_depth(const PointCloud& cloud, const DepthQuery& query);

// Same minimization with an explicit direction set (no refinement step);
// exposed for grid-invariance testing and shared grids across calls.
DepthResult robust_depth_with_directions(const PointCloud& cloud, const std::vector<double>& z,
                                         double delta, const std::vector<Direction>& directions,
                                         int threads = 1);

// Minimum over directions of the open-side infimum mass.
DepthResult lower_depth(const PointCloud& cloud, const DepthQuery& query);
DepthResult lower_depth_with_directions(const PointCloud& cloud, const std::vector<double>& z,
                                        double delta, const std::vector<Direction>& directions,
                                        int threads = 1);

// Classical halfspace depth: exact in d=1; exact in d=2 via the critical
// directions orthogonal to z - x_i (each nudged both ways); grid-based
// minimum for d >= 3.
double tukey_depth(const PointCloud& cloud, const std::vector<double>& z,
                   std::size_t n_directions, std::uint64_t seed);

// The d=2 critical direction set used by exact Tukey depth: for every
// nonzero v_i = x_i - z, both perpendiculars, each exact and nudged by
// +-1e-9 radians. Empty when every point coincides with z.
std::vector<Direction> tukey_critical_directions_2d(const PointCloud& cloud,
                                                    const std::vector<double>& z);

// Minimum closed-halfspace empirical mass over an explicit direction set,
// with the argmin direction (smallest index wins ties).
DepthResult tukey_with_directions(const PointCloud& cloud, const std::vector<double>& z,
                                  const std::vector<Direction>& directions, int threads = 1);

// Derivative of the closed-side worst-case mass with respect to the
// direction angle at u = (cos theta, sin theta). Throws DegenerateDirection
// when the configuration is non-generic within tolerance 1e-9 (zero
// projections, tied sorted positives around the budget crossing, or the
// budget landing on a prefix sum); returns 0 on the flat value-1 region.
double value_gradient_2d(const PointCloud& cloud, const std::vector<double>& z, double delta,
                         double theta);

// Backtracking gradient descent on the angle from theta0; falls back to
// central finite differences (h = 1e-6) on degenerate angles. The returned
// value never exceeds the starting value by more than 1e-12.
std::pair<double, double> refine_direction_2d(const PointCloud& cloud,
                                              const std::vector<double>& z, double delta,
                                              double theta0, std::size_t max_iter = 100,
                                              double tol = 1e-8);

struct MaxDepthOptions {
    std::size_t n_directions = 1000;
    std::uint64_t seed = 0;
    std::size_t starts = 9;       // coordinate-wise median plus perturbations
    std::size_t max_iter = 500;   // simplex iterations per start
    double tol = 1e-6;            // stop when the simplex depth spread is below
};

struct MaxDepthResult {
    double alpha_bar = 0.0;
    std::vector<double> argmax_z;
    std::size_t evaluations = 0;
};

// Maximizes the robust depth over the query point by multi-start
// Nelder-Mead simplex search; convex upper level sets make local search
// reliable, and the result is a certified lower bound on the true maximum.
MaxDepthResult max_depth(const PointCloud& cloud, double delta,
                         const MaxDepthOptions& options = MaxDepthOptions());

// Unique root in (0, 1/2] of alpha/(1-alpha) = alpha_bar_fn(delta/(1-alpha)).
// Returns exactly 1/2 when alpha_bar_fn(2*delta) == 1. The callback must be
// nondecreasing with values in (0, 1]; values outside throw InvalidAlphaBar.
double alpha_star(double delta, const std::function<double(double)>& alpha_bar_fn);

}  // namespace rdepth
