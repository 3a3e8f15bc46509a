// Command-line front-end: CSV ingestion, depth queries, grid and contour
// emission, median certificates, and seeded experiment reports. Errors go
// to stderr with exit code 1; data goes to stdout; identical invocations
// produce identical bytes.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rdepth/core.hpp"
#include "rdepth/depth.hpp"
#include "rdepth/experiments.hpp"
#include "rdepth/geometry.hpp"
#include "rdepth/median.hpp"

namespace {

using rdepth::Error;

// -1 means shortest round-trip formatting.
std::string num(double x, int precision) {
    return precision < 0 ? rdepth::format_double(x) : rdepth::format_double(x, precision);
}

// Precedence: --threads flag, then RDEPTH_THREADS, then 1.
int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (flag_value < 0) throw Error("--threads must be positive");
    if (const char* env = std::getenv("RDEPTH_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
            // fall through to the default below
        }
        throw Error(std::string("RDEPTH_THREADS must be a positive integer, got \"") + env +
                    "\"");
    }
    return 1;
}

std::size_t parse_count(const std::string& text, const std::string& what) {
    const std::vector<double> v = rdepth::parse_vector(text);
    if (v.size() != 1 || v[0] < 1 || v[0] != static_cast<double>(static_cast<std::size_t>(v[0]))) {
        throw Error(what + " must be a single positive integer, got \"" + text + "\"");
    }
    return static_cast<std::size_t>(v[0]);
}

std::vector<std::size_t> parse_count_list(const std::string& text, const std::string& what) {
    std::vector<std::size_t> out;
    for (double x : rdepth::parse_vector(text)) {
        if (x < 1 || x != static_cast<double>(static_cast<std::size_t>(x))) {
            throw Error(what + " must be a comma-separated list of positive integers, got \"" +
                        text + "\"");
        }
        out.push_back(static_cast<std::size_t>(x));
    }
    return out;
}

std::string depth_result_json(const rdepth::DepthResult& r, int precision) {
    std::ostringstream out;
    out << "{\"depth\":" << num(r.depth, precision) << ",\"direction\":[";
    for (std::size_t k = 0; k < r.argmin_direction.d(); ++k) {
        if (k > 0) out << ",";
        out << num(r.argmin_direction[k], precision);
    }
    out << "],\"evaluations\":" << r.evaluations
        << ",\"refined\":" << (r.refined ? "true" : "false") << "}\n";
    return out.str();
}

struct DepthArgs {
    std::string input;
    std::string point;
    double delta = 0.0;
    std::size_t directions = 1000;
    bool refine = false;
    std::uint64_t seed = 0;
};

void add_depth_options(CLI::App* sub, DepthArgs& args) {
    sub->add_option("--input", args.input, "input CSV file (one point per row)")->required();
    sub->add_option("--point", args.point, "query point, comma-separated coordinates")
        ->required();
    sub->add_option("--delta", args.delta, "Wasserstein ambiguity radius (0 = classical)");
    sub->add_option("--directions", args.directions, "direction-grid size (default 1000)");
    sub->add_option("--seed", args.seed, "direction sampling seed for d >= 3");
}

void run_depth_command(const DepthArgs& args, int threads_flag, int precision, bool lower) {
    const rdepth::PointCloud cloud = rdepth::read_csv_cloud(args.input);
    rdepth::DepthQuery query;
    query.z = rdepth::parse_vector(args.point);
    query.delta = args.delta;
    query.n_directions = args.directions;
    query.refine = args.refine;
    query.seed = args.seed;
    query.threads = resolve_threads(threads_flag);
    const rdepth::DepthResult r =
        lower ? rdepth::lower_depth(cloud, query) : rdepth::robust_depth(cloud, query);
    std::cout << depth_result_json(r, precision);
}

struct GridArgs {
    std::string input;
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    std::size_t nx = 0, ny = 0;
    double delta = 0.0;
    std::string mode = "robust";
    std::size_t directions = 1000;
    std::uint64_t seed = 0;
};

void run_grid_command(const GridArgs& args, int threads_flag, int precision) {
    if (!(args.xmin < args.xmax) || !(args.ymin < args.ymax)) {
        throw Error("grid bounds must satisfy xmin < xmax and ymin < ymax");
    }
    if (args.nx < 2 || args.ny < 2) {
        throw Error("grid resolution must satisfy nx >= 2 and ny >= 2");
    }
    const rdepth::PointCloud cloud = rdepth::read_csv_cloud(args.input);
    if (cloud.d() != 2) {
        throw Error("grid requires a planar (d = 2) cloud, got d = " +
                    std::to_string(cloud.d()));
    }
    const int threads = resolve_threads(threads_flag);
    const bool needs_dirs = args.mode == "robust" || args.mode == "lower";
    std::vector<rdepth::Direction> dirs;
    if (needs_dirs) dirs = rdepth::direction_grid(2, args.directions, args.seed);

    std::ostringstream out;
    for (std::size_t iy = 0; iy < args.ny; ++iy) {
        const double y =
            args.ymin + (args.ymax - args.ymin) * static_cast<double>(iy) /
                            static_cast<double>(args.ny - 1);
        for (std::size_t ix = 0; ix < args.nx; ++ix) {
            const double x =
                args.xmin + (args.xmax - args.xmin) * static_cast<double>(ix) /
                                static_cast<double>(args.nx - 1);
            const std::vector<double> z = {x, y};
            double value = 0.0;
            if (args.mode == "robust") {
                value = rdepth::robust_depth_with_directions(cloud, z, args.delta, dirs, threads)
                            .depth;
            } else if (args.mode == "lower") {
                value = rdepth::lower_depth_with_directions(cloud, z, args.delta, dirs, threads)
                            .depth;
            } else if (args.mode == "tukey") {
                value = rdepth::tukey_depth(cloud, z, args.directions, args.seed);
            } else if (args.mode == "min_delta") {
                value = rdepth::min_delta_full_depth_2d(cloud, z);
            } else {
                throw Error("unknown grid mode \"" + args.mode +
                            "\"; valid modes: robust, lower, tukey, min_delta");
            }
            out << num(x, precision) << ',' << num(y, precision) << ','
                << num(value, precision) << '\n';
        }
    }
    std::cout << out.str();
}

struct ContourArgs {
    std::string input;
    double delta = 0.0;
    double alpha = -1.0;
    std::size_t rays = 64;
    std::string center;
    std::string mode = "robust";
    std::size_t directions = 1000;
    std::uint64_t seed = 0;
};

void run_contour_command(const ContourArgs& args, int threads_flag, int precision) {
    if (!(args.alpha > 0.0) || args.alpha >= 1.0) {
        throw Error("--alpha must lie in (0, 1)");
    }
    if (args.rays < 3) {
        throw Error("--rays must be at least 3");
    }
    rdepth::ContourMode mode = rdepth::ContourMode::kRobust;
    if (args.mode == "lower") {
        mode = rdepth::ContourMode::kLower;
    } else if (args.mode != "robust") {
        throw Error("unknown contour mode \"" + args.mode + "\"; valid modes: robust, lower");
    }
    const rdepth::PointCloud cloud = rdepth::read_csv_cloud(args.input);
    const int threads = resolve_threads(threads_flag);
    std::vector<double> center;
    if (!args.center.empty()) {
        center = rdepth::parse_vector(args.center);
    } else {
        rdepth::MaxDepthOptions options;
        options.n_directions = args.directions;
        options.seed = args.seed;
        center = rdepth::max_depth(cloud, args.delta, options).argmax_z;
    }
    const rdepth::ContourPolyline poly = rdepth::contour_2d(
        cloud, args.delta, args.alpha, center, args.rays, mode, args.directions, threads);
    std::ostringstream out;
    for (const auto& p : poly.points) {
        out << num(p[0], precision) << ',' << num(p[1], precision) << '\n';
    }
    std::cout << out.str();
}

struct ExperimentArgs {
    std::string name;
    std::string format = "json";
    std::uint64_t seed = 1;
    std::string n;          // single count, or a comma list for consistency
    std::size_t d = 2;
    double delta = -1.0;    // sentinel: per-experiment default
    std::size_t reps = 0;   // sentinel: per-experiment default
    double correlation = 0.0;
    std::string z = "0,0";
    std::string input;
    std::size_t m = 10;
    double t = 10000.0;
    std::string u;
};

rdepth::ExperimentReport run_experiment(const ExperimentArgs& args) {
    const double delta = args.delta < 0.0 ? 0.1 : args.delta;
    if (args.name == "ordering") {
        const std::size_t n = args.n.empty() ? 50 : parse_count(args.n, "--n");
        const std::size_t reps = args.reps == 0 ? 200 : args.reps;
        return rdepth::ordering_experiment(args.d, n, delta, reps, args.seed);
    }
    if (args.name == "breakdown") {
        if (args.input.empty()) throw Error("experiment breakdown requires --input");
        const rdepth::PointCloud cloud = rdepth::read_csv_cloud(args.input);
        std::vector<double> u_coords;
        if (args.u.empty()) {
            u_coords.assign(cloud.d(), 0.0);
            u_coords[0] = 1.0;
        } else {
            u_coords = rdepth::parse_vector(args.u);
        }
        return rdepth::breakdown_demo(cloud, delta, args.m, args.t,
                                      rdepth::Direction(u_coords), args.seed);
    }
    if (args.name == "consistency") {
        const std::vector<std::size_t> ns =
            args.n.empty() ? std::vector<std::size_t>{200, 1000, 5000}
                           : parse_count_list(args.n, "--n");
        return rdepth::consistency_experiment(ns, delta, rdepth::parse_vector(args.z),
                                              args.seed);
    }
    if (args.name == "subset-count") {
        const std::size_t n = args.n.empty() ? 100 : parse_count(args.n, "--n");
        const std::size_t reps = args.reps == 0 ? 200 : args.reps;
        return rdepth::subset_count_experiment(args.correlation, n, reps, args.seed);
    }
    throw Error("unknown experiment name \"" + args.name +
                "\"; valid names: ordering, breakdown, consistency, subset-count");
}

void run_experiment_command(const ExperimentArgs& args, int precision) {
    if (args.format != "json" && args.format != "text") {
        throw Error("unknown report format \"" + args.format + "\"; valid formats: json, text");
    }
    const rdepth::ExperimentReport report = run_experiment(args);
    if (args.format == "json") {
        std::cout << rdepth::report_json(report, precision) << "\n";
    } else {
        std::cout << rdepth::report_text(report, precision);
    }
    std::cerr << "elapsed_seconds " << rdepth::format_double(report.wall_seconds, 3) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributionally robust halfspace depth for empirical point clouds"};
    app.require_subcommand(1);

    int precision = -1;
    int threads_flag = 0;
    app.add_option("--precision", precision,
                   "significant digits for numeric output (default: shortest round-trip)");
    app.add_option("--threads", threads_flag,
                   "worker bound (fallback: RDEPTH_THREADS, then 1)");

    DepthArgs depth_args;
    CLI::App* depth_cmd =
        app.add_subcommand("depth", "worst-case (robust) halfspace depth of a point");
    depth_cmd->fallthrough();
    add_depth_options(depth_cmd, depth_args);
    depth_cmd->add_flag("--refine", depth_args.refine,
                        "polish the best grid directions by gradient descent (d = 2)");

    DepthArgs lower_args;
    CLI::App* lower_cmd =
        app.add_subcommand("lower-depth", "open-halfspace lower depth of a point");
    lower_cmd->fallthrough();
    add_depth_options(lower_cmd, lower_args);

    GridArgs grid_args;
    CLI::App* grid_cmd = app.add_subcommand("grid", "evaluate a depth field on a planar grid");
    grid_cmd->fallthrough();
    grid_cmd->add_option("--input", grid_args.input, "input CSV file")->required();
    grid_cmd->add_option("--xmin", grid_args.xmin, "grid lower x bound")->required();
    grid_cmd->add_option("--xmax", grid_args.xmax, "grid upper x bound")->required();
    grid_cmd->add_option("--ymin", grid_args.ymin, "grid lower y bound")->required();
    grid_cmd->add_option("--ymax", grid_args.ymax, "grid upper y bound")->required();
    grid_cmd->add_option("--nx", grid_args.nx, "grid columns (>= 2)")->required();
    grid_cmd->add_option("--ny", grid_args.ny, "grid rows (>= 2)")->required();
    grid_cmd->add_option("--delta", grid_args.delta, "ambiguity radius for robust/lower modes");
    grid_cmd->add_option("--mode", grid_args.mode,
                         "field: robust, lower, tukey, or min_delta (default robust)");
    grid_cmd->add_option("--directions", grid_args.directions, "direction-grid size");
    grid_cmd->add_option("--seed", grid_args.seed, "direction sampling seed for d >= 3");

    ContourArgs contour_args;
    CLI::App* contour_cmd =
        app.add_subcommand("contour", "trace a depth level set as a polyline");
    contour_cmd->fallthrough();
    contour_cmd->add_option("--input", contour_args.input, "input CSV file")->required();
    contour_cmd->add_option("--delta", contour_args.delta, "ambiguity radius");
    contour_cmd->add_option("--alpha", contour_args.alpha, "depth level in (0, 1)")->required();
    contour_cmd->add_option("--rays", contour_args.rays, "vertices to trace (default 64)");
    contour_cmd->add_option("--center", contour_args.center,
                            "interior start point x,y (default: deepest point)");
    contour_cmd->add_option("--mode", contour_args.mode, "robust or lower (default robust)");
    contour_cmd->add_option("--directions", contour_args.directions, "direction-grid size");
    contour_cmd->add_option("--seed", contour_args.seed, "search seed for the default center");

    std::string md_input;
    std::string md_point;
    CLI::App* min_delta_cmd = app.add_subcommand(
        "median-min-delta", "smallest radius at which a point attains full depth");
    min_delta_cmd->fallthrough();
    min_delta_cmd->add_option("--input", md_input, "input CSV file")->required();
    min_delta_cmd->add_option("--point", md_point, "query point x,y")->required();

    std::string mm_input;
    std::string mm_point;
    double mm_delta = 0.0;
    CLI::App* member_cmd =
        app.add_subcommand("median-member", "test membership in the full-depth median region");
    member_cmd->fallthrough();
    member_cmd->add_option("--input", mm_input, "input CSV file")->required();
    member_cmd->add_option("--point", mm_point, "query point x,y")->required();
    member_cmd->add_option("--delta", mm_delta, "ambiguity radius (> 0)")->required();

    ExperimentArgs exp_args;
    CLI::App* exp_cmd = app.add_subcommand("experiment", "run a seeded study and print a report");
    exp_cmd->fallthrough();
    exp_cmd->add_option("--name", exp_args.name,
                        "ordering, breakdown, consistency, or subset-count")
        ->required();
    exp_cmd->add_option("--format", exp_args.format, "report format: json or text");
    exp_cmd->add_option("--seed", exp_args.seed, "master seed (default 1)");
    exp_cmd->add_option("--n", exp_args.n,
                        "sample size (comma list of sizes for consistency)");
    exp_cmd->add_option("--d", exp_args.d, "dimension (ordering)");
    exp_cmd->add_option("--delta", exp_args.delta, "ambiguity radius (default 0.1)");
    exp_cmd->add_option("--reps", exp_args.reps, "replicates (default 200)");
    exp_cmd->add_option("--correlation", exp_args.correlation,
                        "component correlation (subset-count)");
    exp_cmd->add_option("--z", exp_args.z, "evaluation point (consistency, default 0,0)");
    exp_cmd->add_option("--input", exp_args.input, "input CSV cloud (breakdown)");
    exp_cmd->add_option("--m", exp_args.m, "contaminating atoms (breakdown, default 10)");
    exp_cmd->add_option("--t", exp_args.t, "contamination distance (breakdown, default 1e4)");
    exp_cmd->add_option("--u", exp_args.u, "contamination direction (breakdown, default +x axis)");

    try {
        app.parse(argc, argv);
        if (depth_cmd->parsed()) {
            run_depth_command(depth_args, threads_flag, precision, /*lower=*/false);
        } else if (lower_cmd->parsed()) {
            run_depth_command(lower_args, threads_flag, precision, /*lower=*/true);
        } else if (grid_cmd->parsed()) {
            run_grid_command(grid_args, threads_flag, precision);
        } else if (contour_cmd->parsed()) {
            run_contour_command(contour_args, threads_flag, precision);
        } else if (min_delta_cmd->parsed()) {
            const rdepth::PointCloud cloud = rdepth::read_csv_cloud(md_input);
            std::cout << num(rdepth::min_delta_full_depth_2d(cloud,
                                                             rdepth::parse_vector(md_point)),
                             precision)
                      << "\n";
        } else if (member_cmd->parsed()) {
            const rdepth::PointCloud cloud = rdepth::read_csv_cloud(mm_input);
            const bool in = rdepth::median_membership(cloud, rdepth::parse_vector(mm_point),
                                                      mm_delta);
            std::cout << (in ? "true" : "false") << "\n";
        } else if (exp_cmd->parsed()) {
            run_experiment_command(exp_args, precision);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
