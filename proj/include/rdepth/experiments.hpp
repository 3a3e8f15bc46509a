#ifndef RDEPTH_EXPERIMENTS_HPP
#define RDEPTH_EXPERIMENTS_HPP

// Seeded Monte-Carlo studies: elliptical samplers, pairwise ordering quality
// against a Mahalanobis reference, contamination/breakdown demonstrations,
// closed-form consistency checks, and optimal-subset counting.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rdepth/core.hpp"
#include "rdepth/median.hpp"

namespace rdepth {

struct NotSPD : Error {
    using Error::Error;
};

enum class EllipticalFamily { kNormal, kCauchy };

// One named figure in a report, optionally with a 95% confidence half-width.
struct Estimate {
    std::string label;
    double value = 0.0;
    double ci95_half_width = 0.0;
    bool has_ci = false;
};

// Insertion-ordered report; serialization is deterministic given the seed.
// wall_seconds is measured per run and deliberately left out of the
// serialized forms so equal seeds give byte-identical output.
struct ExperimentReport {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> parameters;
    std::vector<Estimate> estimates;
    double wall_seconds = 0.0;
};

// JSON / aligned-column renderings of a report. significant_digits < 0 means
// full round-trip formatting.
std::string report_json(const ExperimentReport& report, int significant_digits = -1);
std::string report_text(const ExperimentReport& report, int significant_digits = -1);

// Lower-triangular Cholesky factor of a symmetric positive definite matrix,
// returned row-major (d*d entries, upper triangle zero). Throws NotSPD.
std::vector<double> cholesky_lower(const std::vector<std::vector<double>>& a);

// Squared Mahalanobis distance x' * (L L')^{-1} * x given the factor L.
double mahalanobis_sq(const std::vector<double>& x, const std::vector<double>& chol_flat,
                      std::size_t d);

// Scatter matrix (2^{-|i-j|}) used by the ordering study.
std::vector<std::vector<double>> geometric_scatter(std::size_t d);

// n draws from an elliptical family with the given scatter: normal samples
// L*g; Cauchy samples L*g/|t| with t an independent standard normal.
PointCloud sample_elliptical(EllipticalFamily family, std::size_t n, std::size_t d,
                             const std::vector<std::vector<double>>& scatter,
                             std::uint64_t seed);

// Probability that robust / classical depth rank a random pair of sample
// points consistently with their Mahalanobis distances, split by whether the
// classical depths of the pair tie exactly.
ExperimentReport ordering_experiment(std::size_t d, std::size_t n, double delta,
                                     std::size_t replicates, std::uint64_t seed);

// Appends m copies of t*u to the cloud and reports the robust depth of the
// contaminant location and of the original deepest point, next to the
// mixture lower bounds both must dominate.
ExperimentReport breakdown_demo(const PointCloud& cloud, double delta, std::size_t m,
                                double t, const Direction& u, std::uint64_t seed);

// Robust depth at z on growing standard-normal samples against the
// population closed form.
ExperimentReport consistency_experiment(const std::vector<std::size_t>& n_values,
                                        double delta, const std::vector<double>& z,
                                        std::uint64_t seed);

// Mean number of optimal (fixed-point) subsets at the distribution center
// for bivariate normal samples with the given correlation.
ExperimentReport subset_count_experiment(double correlation, std::size_t n,
                                         std::size_t replicates, std::uint64_t seed);

}  // namespace rdepth

#endif  // RDEPTH_EXPERIMENTS_HPP
