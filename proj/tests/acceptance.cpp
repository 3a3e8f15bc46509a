// Acceptance gate: ten end-to-end checks covering the exact inner solver,
// anchor and far-field depth values, the median threshold machinery, the
// standard-normal closed forms, counting and ordering studies, gradient
// accuracy, and the depth property suite. Each criterion prints one
// PASS/FAIL line with its measured wall time; the process exits nonzero if
// any criterion fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "rdepth/core.hpp"
#include "rdepth/depth.hpp"
#include "rdepth/experiments.hpp"
#include "rdepth/geometry.hpp"
#include "rdepth/inner.hpp"
#include "rdepth/median.hpp"

namespace {

using rdepth::Direction;
using rdepth::PointCloud;
using rdepth::RandomStream;

constexpr double kPi = 3.14159265358979323846;

using Failures = std::vector<std::string>;

void expect(Failures& failures, bool ok, const std::string& message) {
    if (!ok) failures.push_back(message);
}

std::string fmt(double x) { return rdepth::format_double(x, 6); }

PointCloud random_cloud(RandomStream& rng, std::size_t n, std::size_t d, double scale) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(d));
    for (auto& row : rows) {
        for (double& c : row) c = scale * rng.normal();
    }
    return PointCloud::validate(rows);
}

std::vector<double> centroid_of(const PointCloud& cloud) {
    std::vector<double> c(cloud.d(), 0.0);
    for (std::size_t i = 0; i < cloud.n(); ++i) {
        for (std::size_t k = 0; k < cloud.d(); ++k) c[k] += cloud.coord(i, k);
    }
    for (double& v : c) v /= static_cast<double>(cloud.n());
    return c;
}

double sup_at_angle(const PointCloud& cloud, const std::vector<double>& z, double delta,
                    double theta) {
    const Direction u = Direction::unchecked({std::cos(theta), std::sin(theta)});
    return rdepth::worst_case_sup(rdepth::project(cloud, z, u), delta);
}

// ---- criterion 1: inner solver agrees with the dual-grid oracle ------------

void criterion_inner_solver(Failures& failures) {
    RandomStream rng(101);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 1 + rng.next_u64() % 200;
        const double scale = std::exp(2.0 * rng.normal());
        std::vector<double> y(n);
        for (double& v : y) {
            const double roll = rng.uniform01();
            if (roll < 0.10) {
                v = 0.0;  // boundary atoms
            } else if (roll < 0.20 && &v != y.data()) {
                v = y[rng.next_u64() % (&v - y.data())];  // exact ties
            } else {
                v = scale * rng.normal();
            }
        }
        const rdepth::ProjectionProfile prof = rdepth::make_profile(y);
        const double delta = std::exp(-4.0 + 6.0 * rng.uniform01()) * scale;
        const double primal = rdepth::worst_case_sup(prof, delta);
        const double dual =
            rdepth::worst_case_sup_dual(prof, delta, 10 * n + 100);
        expect(failures, std::fabs(primal - dual) <= 1e-6,
               "primal " + fmt(primal) + " vs dual " + fmt(dual) + " at rep " +
                   std::to_string(rep));
        expect(failures, rdepth::worst_case_sup(prof, 0.0) == prof.p,
               "delta=0 must return the closed-side mass exactly");
    }
    // Deterministic (single-atom) case: exactly min(delta / c, 1).
    for (int rep = 0; rep < 200; ++rep) {
        const double c = std::exp(-2.0 + 4.0 * rng.uniform01());
        const double delta = std::exp(-2.0 + 4.0 * rng.uniform01());
        const rdepth::ProjectionProfile prof = rdepth::make_profile({c});
        const double got = rdepth::worst_case_sup(prof, delta);
        const double want = std::min(delta / c, 1.0);
        expect(failures, got == want,
               "single-atom value " + fmt(got) + " != min(delta/c,1) = " + fmt(want));
    }
}

// ---- criterion 2: two-point anchor -----------------------------------------

void criterion_anchor(Failures& failures) {
    const PointCloud anchor = PointCloud::validate({{1.0, 1.0}, {1.0, -1.0}});
    for (double delta : {0.05, 0.1, 0.3, 0.49}) {
        rdepth::DepthQuery q;
        q.z = {0.0, 0.0};
        q.delta = delta;
        for (bool refine : {false, true}) {
            q.refine = refine;
            const double depth = rdepth::robust_depth(anchor, q).depth;
            expect(failures, depth == delta,
                   "anchor depth " + fmt(depth) + " != delta " + fmt(delta) +
                       (refine ? " (refined)" : ""));
        }
    }
}

// ---- criterion 3: far-field level sets -------------------------------------

void criterion_far_field(Failures& failures) {
    RandomStream rng(303);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 10 + rng.next_u64() % 40;
        const PointCloud cloud = random_cloud(rng, n, 2, 1.0);
        const double delta = 0.05 + 0.2 * rng.uniform01();
        const rdepth::HullPolygon hull = rdepth::convex_hull_2d(cloud);
        const double diam = rdepth::hull_diameter(hull);
        const std::vector<double> c = centroid_of(cloud);
        const double phi = 2.0 * kPi * rng.uniform01();
        double radius = (delta * static_cast<double>(n) + diam + 1.0) *
                        (1.0 + rng.uniform01());
        std::vector<double> z;
        double dist = 0.0;
        for (int tries = 0; tries < 60; ++tries) {
            z = {c[0] + radius * std::cos(phi), c[1] + radius * std::sin(phi)};
            dist = rdepth::dist_to_hull(z, hull);
            if (dist >= delta * static_cast<double>(n)) break;
            radius *= 2.0;
        }
        rdepth::DepthQuery q;
        q.z = z;
        q.delta = delta;
        q.refine = true;
        const double depth = rdepth::robust_depth(cloud, q).depth;
        expect(failures, std::fabs(depth - delta / dist) <= 1e-3,
               "far depth " + fmt(depth) + " vs delta/dist " + fmt(delta / dist));
    }
    // Asymptotic decay: ||z|| * depth / delta -> 1 at 1000 hull diameters.
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 10 + rng.next_u64() % 40;
        const PointCloud cloud = random_cloud(rng, n, 2, 1.0);
        const double delta = 0.05 + 0.2 * rng.uniform01();
        const double diam = rdepth::hull_diameter(rdepth::convex_hull_2d(cloud));
        const double phi = 2.0 * kPi * rng.uniform01();
        const double norm_z = 1e3 * diam;
        rdepth::DepthQuery q;
        q.z = {norm_z * std::cos(phi), norm_z * std::sin(phi)};
        q.delta = delta;
        q.refine = true;
        const double depth = rdepth::robust_depth(cloud, q).depth;
        expect(failures, std::fabs(norm_z * depth / delta - 1.0) <= 0.01,
               "asymptotic ratio " + fmt(norm_z * depth / delta) + " at rep " +
                   std::to_string(rep));
    }
}

// ---- criterion 4: median threshold equivalence -----------------------------

void criterion_median(Failures& failures) {
    RandomStream rng(404);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng.next_u64() % 12;
        const PointCloud cloud = random_cloud(rng, n, 2, 1.0);
        std::vector<double> z = {0.7 * rng.normal(), 0.7 * rng.normal()};
        if (rng.uniform01() < 0.2) {
            const std::size_t i = rng.next_u64() % n;
            z = {cloud.coord(i, 0), cloud.coord(i, 1)};
        }
        const double md = rdepth::min_delta_full_depth_2d(cloud, z);
        std::vector<std::array<double, 2>> vs(n);
        for (std::size_t i = 0; i < n; ++i) {
            vs[i] = {cloud.coord(i, 0) - z[0], cloud.coord(i, 1) - z[1]};
        }
        const double oracle = rdepth::subset_norm_oracle(vs);
        expect(failures,
               std::fabs(md * static_cast<double>(n) - oracle) <= 1e-9,
               "sweep " + fmt(md * static_cast<double>(n)) + " vs subset oracle " +
                   fmt(oracle));
        if (md < 1e-9) continue;

        // Direction set: a dense grid plus the certificate direction opposite
        // the heaviest separable window, which pins the depth below 1 whenever
        // the budget is short.
        std::vector<Direction> dirs = rdepth::direction_grid(2, 3600, 0);
        const rdepth::SeparableSubsets family = rdepth::enumerate_separable_2d(cloud);
        double best = -1.0;
        std::array<double, 2> s_best = {0.0, 0.0};
        for (std::size_t w = 0; w < family.size(); ++w) {
            const double card = static_cast<double>(family.cardinalities[w]);
            const std::array<double, 2> s = {family.sums[w][0] - card * z[0],
                                             family.sums[w][1] - card * z[1]};
            const double norm = std::hypot(s[0], s[1]);
            if (norm > best) {
                best = norm;
                s_best = s;
            }
        }
        if (best > 0.0) {
            dirs.push_back(Direction({-s_best[0] / best, -s_best[1] / best}));
        }

        const double inside_delta = 1.2 * md;
        expect(failures, rdepth::median_membership(cloud, z, inside_delta),
               "membership false above the threshold at rep " + std::to_string(rep));
        const double inside_depth =
            rdepth::robust_depth_with_directions(cloud, z, inside_delta, dirs).depth;
        expect(failures, inside_depth >= 1.0 - 1e-4,
               "member depth " + fmt(inside_depth) + " below saturation");

        const double outside_delta = 0.8 * md;
        expect(failures, !rdepth::median_membership(cloud, z, outside_delta),
               "membership true below the threshold at rep " + std::to_string(rep));
        const double outside_depth =
            rdepth::robust_depth_with_directions(cloud, z, outside_delta, dirs).depth;
        expect(failures, outside_depth <= 1.0 - 1e-4,
               "non-member depth " + fmt(outside_depth) + " not below saturation");
    }
}

// ---- criterion 5: standard-normal closed forms -----------------------------

void criterion_normal_sample(Failures& failures) {
    const std::vector<std::vector<double>> identity = {{1.0, 0.0}, {0.0, 1.0}};
    const PointCloud cloud =
        rdepth::sample_elliptical(rdepth::EllipticalFamily::kNormal, 5000, 2, identity, 505);

    rdepth::MaxDepthOptions options;
    options.n_directions = 200;
    options.seed = 5;
    options.starts = 5;
    options.max_iter = 150;
    options.tol = 1e-5;
    const double alpha_bar = rdepth::max_depth(cloud, 0.1, options).alpha_bar;
    const double closed_form =
        rdepth::normal_cdf(std::sqrt(-2.0 * std::log(1.0 - 0.1 * std::sqrt(2.0 * kPi))));
    expect(failures, std::fabs(alpha_bar - closed_form) <= 0.04,
           "max depth " + fmt(alpha_bar) + " vs closed form " + fmt(closed_form));

    // Full depth at the center appears exactly at delta = E[Z^+] = 1/sqrt(2 pi).
    const double md = rdepth::min_delta_full_depth_2d(cloud, {0.0, 0.0});
    const double threshold = 1.0 / std::sqrt(2.0 * kPi);
    expect(failures, std::fabs(md / threshold - 1.0) <= 0.05,
           "center threshold " + fmt(md) + " vs 1/sqrt(2 pi) " + fmt(threshold));
}

// ---- criterion 6: level threshold roots ------------------------------------

void criterion_alpha_star(Failures& failures) {
    const auto alpha_bar = [](double delta) { return rdepth::normal_inner_sup(0.0, delta); };
    const double at_zero = rdepth::alpha_star(0.0, alpha_bar);
    expect(failures, std::fabs(at_zero - 1.0 / 3.0) <= 1e-8,
           "alpha*(0) = " + fmt(at_zero) + " != 1/3");
    const double at_02 = rdepth::alpha_star(0.2, alpha_bar);
    expect(failures, at_02 == 0.5, "alpha*(0.2) = " + fmt(at_02) + " != 1/2 exactly");
}

// ---- criterion 7: subset-count bands ---------------------------------------

const rdepth::Estimate* find_estimate(const rdepth::ExperimentReport& report,
                                      const std::string& label) {
    for (const auto& e : report.estimates) {
        if (e.label == label) return &e;
    }
    return nullptr;
}

void criterion_subset_counts(Failures& failures) {
    const rdepth::ExperimentReport independent =
        rdepth::subset_count_experiment(0.0, 100, 200, 707);
    const rdepth::Estimate* mean0 = find_estimate(independent, "mean_count");
    expect(failures, mean0 != nullptr, "mean_count estimate missing (correlation 0)");
    if (mean0) {
        expect(failures, mean0->value >= 30.0 && mean0->value <= 44.0,
               "mean count " + fmt(mean0->value) + " outside [30, 44] at correlation 0");
    }
    const rdepth::ExperimentReport correlated =
        rdepth::subset_count_experiment(0.7, 100, 200, 707);
    const rdepth::Estimate* mean7 = find_estimate(correlated, "mean_count");
    expect(failures, mean7 != nullptr, "mean_count estimate missing (correlation 0.7)");
    if (mean7) {
        expect(failures, mean7->value >= 6.0 && mean7->value <= 12.0,
               "mean count " + fmt(mean7->value) + " outside [6, 12] at correlation 0.7");
    }
}

// ---- criterion 8: angular gradient accuracy --------------------------------

void criterion_gradient(Failures& failures) {
    RandomStream rng(808);
    int successes = 0;
    int attempts = 0;
    while (successes < 100 && attempts < 2000) {
        ++attempts;
        const std::size_t n = 5 + rng.next_u64() % 60;
        const PointCloud cloud = random_cloud(rng, n, 2, 1.0);
        const std::vector<double> z = {0.5 * rng.normal(), 0.5 * rng.normal()};
        const double delta = 0.05 + 0.3 * rng.uniform01();
        const double theta = 2.0 * kPi * rng.uniform01();
        double g = 0.0;
        try {
            g = rdepth::value_gradient_2d(cloud, z, delta, theta);
        } catch (const rdepth::DegenerateDirection&) {
            continue;
        }
        const double h = 1e-5;
        const double fd = (sup_at_angle(cloud, z, delta, theta + h) -
                           sup_at_angle(cloud, z, delta, theta - h)) /
                          (2.0 * h);
        if (!(g == 0.0 && fd == 0.0)) {
            expect(failures, std::fabs(g - fd) <= 1e-4 * std::max(1.0, std::fabs(fd)),
                   "gradient " + fmt(g) + " vs central difference " + fmt(fd));
        }
        ++successes;
    }
    expect(failures, successes == 100, "fewer than 100 generic tuples found");

    // Refinement must never increase the value it starts from.
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 5 + rng.next_u64() % 60;
        const PointCloud cloud = random_cloud(rng, n, 2, 1.0);
        const std::vector<double> z = {0.5 * rng.normal(), 0.5 * rng.normal()};
        const double delta = 0.05 + 0.3 * rng.uniform01();
        const double theta0 = 2.0 * kPi * rng.uniform01();
        const double before = sup_at_angle(cloud, z, delta, theta0);
        const auto [theta, after] = rdepth::refine_direction_2d(cloud, z, delta, theta0);
        expect(failures, after <= before + 1e-12,
               "refinement increased " + fmt(before) + " to " + fmt(after));
    }
}

// ---- criterion 9: depth property suite -------------------------------------

void criterion_properties(Failures& failures) {
    RandomStream rng(909);
    const std::vector<Direction> dirs = rdepth::direction_grid(2, 360, 7);
    for (int rep = 0; rep < 15; ++rep) {
        const std::size_t n = 8 + rng.next_u64() % 40;
        const PointCloud cloud = random_cloud(rng, n, 2, 1.0);
        const std::vector<double> z = {0.8 * rng.normal(), 0.8 * rng.normal()};

        // Monotone in the radius on a shared direction grid.
        const double v_small =
            rdepth::robust_depth_with_directions(cloud, z, 0.02, dirs).depth;
        const double v_mid = rdepth::robust_depth_with_directions(cloud, z, 0.1, dirs).depth;
        const double v_big = rdepth::robust_depth_with_directions(cloud, z, 0.3, dirs).depth;
        expect(failures, v_small <= v_mid && v_mid <= v_big,
               "monotonicity in delta violated at rep " + std::to_string(rep));

        // Lower depth <= classical depth <= robust depth on the same grid.
        const double lower = rdepth::lower_depth_with_directions(cloud, z, 0.1, dirs).depth;
        const double classical = rdepth::tukey_with_directions(cloud, z, dirs).depth;
        expect(failures, lower <= classical && classical <= v_mid,
               "sandwich ordering violated at rep " + std::to_string(rep));

        // Quasi-concavity along a random segment.
        const std::vector<double> za = {rng.normal(), rng.normal()};
        const std::vector<double> zb = {rng.normal(), rng.normal()};
        const std::vector<double> zm = {0.5 * (za[0] + zb[0]), 0.5 * (za[1] + zb[1])};
        const double va = rdepth::robust_depth_with_directions(cloud, za, 0.1, dirs).depth;
        const double vb = rdepth::robust_depth_with_directions(cloud, zb, 0.1, dirs).depth;
        const double vm = rdepth::robust_depth_with_directions(cloud, zm, 0.1, dirs).depth;
        expect(failures, vm >= std::min(va, vb) - 5e-3,
               "midpoint depth " + fmt(vm) + " below min(" + fmt(va) + ", " + fmt(vb) + ")");

        // Isometric invariance: rotate the cloud, the query, and the grid.
        const double ang = 2.0 * kPi * rng.uniform01();
        const double ca = std::cos(ang);
        const double sa = std::sin(ang);
        std::vector<std::vector<double>> rotated_rows(n, std::vector<double>(2));
        for (std::size_t i = 0; i < n; ++i) {
            const double x = cloud.coord(i, 0);
            const double y = cloud.coord(i, 1);
            rotated_rows[i] = {ca * x - sa * y, sa * x + ca * y};
        }
        const PointCloud rotated_cloud = PointCloud::validate(rotated_rows);
        const std::vector<double> rz = {ca * z[0] - sa * z[1], sa * z[0] + ca * z[1]};
        std::vector<Direction> rotated_dirs;
        rotated_dirs.reserve(dirs.size());
        for (const Direction& u : dirs) {
            rotated_dirs.push_back(
                Direction::unchecked({ca * u[0] - sa * u[1], sa * u[0] + ca * u[1]}));
        }
        const double v_rot =
            rdepth::robust_depth_with_directions(rotated_cloud, rz, 0.1, rotated_dirs).depth;
        expect(failures, std::fabs(v_rot - v_mid) <= 1e-12,
               "rotation changed depth by " + fmt(std::fabs(v_rot - v_mid)));

        // Strict positivity away from the data once the radius is positive.
        const double diam = rdepth::hull_diameter(rdepth::convex_hull_2d(cloud));
        const std::vector<double> far = {3.0 * diam + 1.0, 3.0 * diam + 1.0};
        expect(failures,
               rdepth::robust_depth_with_directions(cloud, far, 0.1, dirs).depth > 0.0,
               "robust depth not strictly positive at a far point");

        // Vanishing radius recovers classical depth.
        rdepth::DepthQuery q;
        q.z = z;
        q.delta = 1e-9;
        q.refine = true;
        const double near_zero = rdepth::robust_depth(cloud, q).depth;
        const double exact = rdepth::tukey_depth(cloud, z, 1000, 0);
        expect(failures,
               near_zero >= exact - 1e-12 &&
                   near_zero <= exact + 1.0 / static_cast<double>(n) + 1e-6,
               "delta->0 depth " + fmt(near_zero) + " vs classical " + fmt(exact));

        // Contamination keeps at least its own mass fraction of depth.
        const std::size_t m = 1 + rng.next_u64() % 6;
        const double t = 50.0 * (diam + 1.0);
        std::vector<std::vector<double>> contaminated(n, std::vector<double>(2));
        for (std::size_t i = 0; i < n; ++i) {
            contaminated[i] = {cloud.coord(i, 0), cloud.coord(i, 1)};
        }
        for (std::size_t j = 0; j < m; ++j) contaminated.push_back({t, 0.0});
        const PointCloud mixed = PointCloud::validate(contaminated);
        const double at_contaminant =
            rdepth::robust_depth_with_directions(mixed, {t, 0.0}, 0.05, dirs).depth;
        const double floor_mass =
            static_cast<double>(m) / static_cast<double>(n + m);
        expect(failures, at_contaminant >= floor_mass,
               "contaminant depth " + fmt(at_contaminant) + " below " + fmt(floor_mass));
    }
}

// ---- criterion 10: pairwise ordering quality -------------------------------

void criterion_ordering(Failures& failures) {
    const rdepth::ExperimentReport report = rdepth::ordering_experiment(2, 50, 0.1, 1999, 1001);
    const rdepth::Estimate* robust = find_estimate(report, "p_robust_correct");
    const rdepth::Estimate* classical = find_estimate(report, "p_tukey_correct");
    const rdepth::Estimate* tied = find_estimate(report, "p_tied_robust_correct");
    expect(failures, robust && classical && tied, "ordering estimates missing");
    if (!(robust && classical && tied)) return;
    expect(failures, std::fabs(robust->value - classical->value) <= 0.05,
           "accuracy gap " + fmt(std::fabs(robust->value - classical->value)) +
               " exceeds 0.05");
    expect(failures, tied->value >= 0.55,
           "tied-pair accuracy " + fmt(tied->value) + " below 0.55");
    expect(failures, tied->has_ci && tied->value - tied->ci95_half_width > 0.5,
           "tied-pair CI [" + fmt(tied->value - tied->ci95_half_width) + ", " +
               fmt(tied->value + tied->ci95_half_width) + "] does not exclude 1/2");
}

struct Criterion {
    std::string name;
    std::function<void(Failures&)> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"inner solver vs dual oracle", criterion_inner_solver},
        {"two-point anchor depth", criterion_anchor},
        {"far-field level sets", criterion_far_field},
        {"median threshold equivalence", criterion_median},
        {"normal-sample closed forms", criterion_normal_sample},
        {"level threshold roots", criterion_alpha_star},
        {"subset-count bands", criterion_subset_counts},
        {"angular gradient accuracy", criterion_gradient},
        {"depth property suite", criterion_properties},
        {"pairwise ordering quality", criterion_ordering},
    };

    int passed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Failures failures;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].body(failures);
        } catch (const std::exception& e) {
            failures.push_back(std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = failures.empty();
        if (ok) ++passed;
        std::printf("[%2zu] %-30s %s %8.2fs\n", i + 1, criteria[i].name.c_str(),
                    ok ? "PASS" : "FAIL", seconds);
        const std::size_t shown = failures.size() < 5 ? failures.size() : 5;
        for (std::size_t k = 0; k < shown; ++k) {
            std::printf("      - %s\n", failures[k].c_str());
        }
        if (failures.size() > shown) {
            std::printf("      - (%zu more)\n", failures.size() - shown);
        }
        std::fflush(stdout);
    }
    std::printf("acceptance: %d/%zu criteria passed\n", passed, criteria.size());
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
