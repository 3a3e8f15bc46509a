// Exact solver for the one-dimensional worst-case mass problems under a
// Wasserstein-1 ambiguity ball around an empirical law. Given projections
// y_i = <u, z - x_i>, computes
//   sup over laws within radius delta of the mass of {Y <= 0}  (closed side)
//   inf over laws within radius delta of the mass of {Y <  0}  (open side)
// by greedy transport over sorted projections, in O(n log n). A dual grid
// minimization serves as an independent oracle, and the standard-normal
// population case has a closed form solved here by bisection.
#pragma once

#include <cstddef>
#include <vector>

#include "rdepth/core.hpp"

namespace rdepth {

// Sorted summary of the projections y_i = <u, z - x_i> of one direction.
struct ProjectionProfile {
    std::vector<double> y;           // raw projections, input order
    std::size_t n = 0;               // total count
    std::size_t m = 0;               // count of strictly positive y_i
    double p = 0.0;                  // (n - m) / n, closed-halfspace mass
    std::vector<double> sorted_pos;  // strictly positive y_i, ascending
    std::vector<double> prefix;      // prefix sums; prefix[0] = 0, size m + 1
    // Strictly negative side, used by the infimum problem.
    std::size_t neg = 0;             // count of strictly negative y_i
    std::vector<double> neg_mag;     // |y_i| over negative y_i, ascending
    std::vector<double> neg_prefix;  // prefix sums; size neg + 1
};

// Builds a profile from raw projections.
ProjectionProfile make_profile(std::vector<double> y);

// Projects cloud points against (z, u): y_i = <u, z - x_i>.
ProjectionProfile project(const PointCloud& cloud, const std::vector<double>& z,
                          const Direction& u);

// sup_{W(Q, P_y) <= delta} Q(Y <= 0). Equals p at delta = 0 and exactly 1
// when the mean positive part is at most delta.
double worst_case_sup(const ProjectionProfile& profile, double delta);

// inf_{W(Q, P_y) <= delta} Q(Y < 0). Equals the strictly-negative fraction
// at delta = 0 and exactly 0 when the mean negative part is at most delta.
double worst_case_inf(const ProjectionProfile& profile, double delta);

// Independent oracle: minimizes delta/lambda + mean(1 - y_i^+ / lambda)^+
// over a lambda grid holding every positive projection, a log-spaced fill
// between the smallest and largest positive projection, and a huge lambda.
double worst_case_sup_dual(const ProjectionProfile& profile, double delta,
                           std::size_t grid_size);

// Generalized inverse of the truncated-mean map: the dual minimizer. Equal
// to the positive projection where the prefix-sum scan crosses delta * n,
// +infinity when the whole positive mass fits into the budget, 0 at delta=0.
struct TruncatedMeanInverse {
    double lambda = 0.0;
};
TruncatedMeanInverse truncated_mean_inverse(const ProjectionProfile& profile, double delta);

// Closed-form population case: X standard normal in any dimension, query at
// distance norm_z from the mean. Solves the truncated-normal-mean equation
// for the transport level by bisection and returns the resulting mass.
double normal_inner_sup(double norm_z, double delta);

// Scratch-buffer evaluator producing bitwise the same values as the
// profile-based functions without materializing a full sorted profile;
// used by direction scans where allocation and full sorts would dominate.
class InnerEvaluator {
public:
    double sup(const double* y, std::size_t n, double delta);
    double inf(const double* y, std::size_t n, double delta);

private:
    std::vector<double> buf_;
};

}  // namespace rdepth
