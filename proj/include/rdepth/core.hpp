// Core domain types shared by every module: validated point clouds, unit
// directions, deterministic seeded randomness, CSV ingestion, numeric
// formatting, and a small deterministic parallel-for helper.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdepth {

// ---------------------------------------------------------------------------
// Errors. Every validation failure carries a human-readable message; the CLI
// maps any Error to exit code 1 with the message on stderr.
// ---------------------------------------------------------------------------
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class EmptyInput : public Error {
public:
    explicit EmptyInput(const std::string& msg) : Error(msg) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

class NonFiniteCoordinate : public Error {
public:
    explicit NonFiniteCoordinate(const std::string& msg) : Error(msg) {}
};

class InvalidDimension : public Error {
public:
    explicit InvalidDimension(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// ---------------------------------------------------------------------------
// PointCloud: immutable n x d array of observations, row-major storage.
// ---------------------------------------------------------------------------
class PointCloud {
public:
    // Validates and adopts the rows; throws EmptyInput, DimensionMismatch or
    // NonFiniteCoordinate on bad input.
    static PointCloud validate(const std::vector<std::vector<double>>& rows);

    // Trusted flat constructor (data.size() == n*d, already validated).
    PointCloud(std::vector<double> data, std::size_t n, std::size_t d);

    std::size_t n() const { return n_; }
    std::size_t d() const { return d_; }
    const double* row(std::size_t i) const { return data_.data() + i * d_; }
    const double* data() const { return data_.data(); }
    double coord(std::size_t i, std::size_t k) const { return data_[i * d_ + k]; }

private:
    std::vector<double> data_;
    std::size_t n_ = 0;
    std::size_t d_ = 0;
};

// validate_cloud: free-function spelling of PointCloud::validate.
PointCloud validate_cloud(const std::vector<std::vector<double>>& rows);

// ---------------------------------------------------------------------------
// Direction: unit vector. Construction renormalizes; a zero vector is
// rejected. The stored norm is within 1e-12 of 1.
// ---------------------------------------------------------------------------
class Direction {
public:
    explicit Direction(std::vector<double> u);
    // Trusted: u is already unit length (used by exact grid constructions).
    static Direction unchecked(std::vector<double> u);

    std::size_t d() const { return u_.size(); }
    const std::vector<double>& coords() const { return u_; }
    double operator[](std::size_t k) const { return u_[k]; }

private:
    Direction() = default;
    std::vector<double> u_;
};

// ---------------------------------------------------------------------------
// Deterministic randomness. A RandomStream wraps a fully specified 64-bit
// Mersenne Twister with its own uniform and Box-Muller transforms so that
// sequences are reproducible bit-for-bit across platforms and library
// versions. Sub-streams are derived from (seed, stream id) via SplitMix64,
// so per-replicate streams are independent of evaluation order.
// ---------------------------------------------------------------------------
std::uint64_t splitmix64(std::uint64_t x);

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    // Child stream for task `stream_id`; deterministic in (seed, stream_id).
    RandomStream derive(std::uint64_t stream_id) const;

    std::uint64_t next_u64();
    double uniform01();                  // [0, 1), 53-bit resolution
    double normal();                     // standard normal via Box-Muller
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_ = 0;
    std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Scalar normal distribution helpers (double precision).
// ---------------------------------------------------------------------------
double normal_cdf(double x);       // Phi
double normal_pdf(double x);       // phi
double normal_quantile(double p);  // Phi^{-1}, Wichura's AS 241 (PPND16)

// ---------------------------------------------------------------------------
// CSV ingestion: one point per row, comma-separated decimals, optional single
// header row auto-detected (non-numeric first row), no quoting. Parse errors
// name the offending 1-based line.
// ---------------------------------------------------------------------------
PointCloud read_csv_cloud(const std::string& path);
PointCloud parse_csv_cloud(const std::string& text, const std::string& origin);

// Parses "a,b,..." into a coordinate vector (used for --point style flags).
std::vector<double> parse_vector(const std::string& text);

// ---------------------------------------------------------------------------
// Numeric output formatting: shortest decimal string that round-trips the
// double exactly (the default), or a fixed number of significant digits.
// ---------------------------------------------------------------------------
std::string format_double(double x);
std::string format_double(double x, int significant_digits);

// ---------------------------------------------------------------------------
// parallel_for: runs fn(i) for i in [0, count) on `threads` workers over
// contiguous chunks. Results must be written to per-index slots by the
// caller, which makes output independent of scheduling. threads <= 1 runs
// inline.
// ---------------------------------------------------------------------------
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace rdepth
