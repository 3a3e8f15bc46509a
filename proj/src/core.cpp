#include "rdepth/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

namespace rdepth {

// ---------------------------------------------------------------------------
// PointCloud
// ---------------------------------------------------------------------------
PointCloud::PointCloud(std::vector<double> data, std::size_t n, std::size_t d)
    : data_(std::move(data)), n_(n), d_(d) {}

PointCloud PointCloud::validate(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        throw EmptyInput("point cloud must contain at least one point");
    }
    const std::size_t d = rows.front().size();
    if (d == 0) {
        throw InvalidDimension("points must have at least one coordinate");
    }
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d) {
            throw DimensionMismatch("row " + std::to_string(i + 1) + " has " +
                                    std::to_string(rows[i].size()) + " coordinates, expected " +
                                    std::to_string(d));
        }
        for (std::size_t k = 0; k < d; ++k) {
            if (!std::isfinite(rows[i][k])) {
                throw NonFiniteCoordinate("row " + std::to_string(i + 1) + ", coordinate " +
                                          std::to_string(k + 1) + " is not finite");
            }
            flat.push_back(rows[i][k]);
        }
    }
    return PointCloud(std::move(flat), rows.size(), d);
}

PointCloud validate_cloud(const std::vector<std::vector<double>>& rows) {
    return PointCloud::validate(rows);
}

// ---------------------------------------------------------------------------
// Direction
// ---------------------------------------------------------------------------
Direction::Direction(std::vector<double> u) {
    if (u.empty()) {
        throw InvalidDimension("direction must have at least one coordinate");
    }
    double norm_sq = 0.0;
    for (double v : u) {
        if (!std::isfinite(v)) {
            throw NonFiniteCoordinate("direction has a non-finite coordinate");
        }
        norm_sq += v * v;
    }
    const double norm = std::sqrt(norm_sq);
    if (!(norm > 0.0)) {
        throw Error("direction must be a nonzero vector");
    }
    for (double& v : u) {
        v /= norm;
    }
    u_ = std::move(u);
}

Direction Direction::unchecked(std::vector<double> u) {
    Direction dir;
    dir.u_ = std::move(u);
    return dir;
}

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

RandomStream RandomStream::derive(std::uint64_t stream_id) const {
    // Child seed mixes the parent seed with the stream id through SplitMix64
    // twice so that nearby ids map to well-separated seeds.
    return RandomStream(splitmix64(seed_ ^ splitmix64(stream_id ^ 0xA3C59AC2F0EB4B21ULL)));
}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform01() {
    // Top 53 bits -> [0, 1) with full double resolution.
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
    // Box-Muller, trigonometric form, no caching: exactly two uniforms per
    // draw keeps downstream streams aligned regardless of call parity.
    const double u1 = 1.0 - uniform01();  // (0, 1], avoids log(0)
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// ---------------------------------------------------------------------------
// Normal distribution
// ---------------------------------------------------------------------------
double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);  // 1/sqrt(2)
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) * 0.3989422804014326779;  // 1/sqrt(2*pi)
}

// Wichura's algorithm AS 241, routine PPND16: relative error below 1e-15
// over the full open interval.
double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        if (p == 0.0) return -HUGE_VAL;
        if (p == 1.0) return HUGE_VAL;
        throw Error("quantile argument must lie in [0, 1]");
    }
    const double q = p - 0.5;
    double r;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r +
                    4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r +
                  1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r +
                3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r +
                    2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r +
                  6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r +
                1.0);
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r +
                   1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r +
                 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r +
               1.42343711074968357734e+0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r +
                   1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r +
                 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r +
               1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r +
                   2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r +
                 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r +
               6.65790464350110377720e+0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r +
                   7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r +
                 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r +
               1.0);
    }
    return (q < 0.0) ? -val : val;
}

// ---------------------------------------------------------------------------
// CSV ingestion
// ---------------------------------------------------------------------------
namespace {

// Attempts to parse a full token (after trimming spaces/tabs) as a double.
bool parse_number(const std::string& token, double& out) {
    std::size_t begin = 0;
    std::size_t end = token.size();
    while (begin < end && (token[begin] == ' ' || token[begin] == '\t')) ++begin;
    while (end > begin && (token[end - 1] == ' ' || token[end - 1] == '\t')) --end;
    if (begin == end) return false;
    const char* first = token.data() + begin;
    const char* last = token.data() + end;
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

bool is_blank(const std::string& line) {
    for (char c : line) {
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

}  // namespace

PointCloud parse_csv_cloud(const std::string& text, const std::string& origin) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool first_data_line = true;
    while (pos <= text.size()) {
        if (pos == text.size()) {
            break;
        }
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) continue;

        const std::vector<std::string> fields = split_fields(line);
        std::vector<double> row(fields.size());
        bool all_numeric = true;
        for (std::size_t k = 0; k < fields.size(); ++k) {
            if (!parse_number(fields[k], row[k])) {
                all_numeric = false;
                break;
            }
        }
        if (!all_numeric) {
            if (first_data_line) {
                // Single header row: skipped. Only the first non-blank line
                // may be non-numeric.
                first_data_line = false;
                continue;
            }
            throw ParseError(origin + ": line " + std::to_string(line_no) +
                             " is not a comma-separated list of numbers");
        }
        first_data_line = false;
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(origin + ": line " + std::to_string(line_no) + " has " +
                             std::to_string(row.size()) + " fields, expected " +
                             std::to_string(rows.front().size()));
        }
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (!std::isfinite(row[k])) {
                throw ParseError(origin + ": line " + std::to_string(line_no) +
                                 " contains a non-finite value");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw EmptyInput(origin + ": no data rows found");
    }
    return PointCloud::validate(rows);
}

PointCloud read_csv_cloud(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open input file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv_cloud(buf.str(), path);
}

std::vector<double> parse_vector(const std::string& text) {
    const std::vector<std::string> fields = split_fields(text);
    std::vector<double> out(fields.size());
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (!parse_number(fields[k], out[k]) || !std::isfinite(out[k])) {
            throw ParseError("cannot parse coordinate list \"" + text + "\"");
        }
    }
    if (out.empty()) {
        throw ParseError("empty coordinate list");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------
std::string format_double(double x) {
    // Shortest decimal representation that round-trips to the same double.
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string format_double(double x, int significant_digits) {
    if (significant_digits <= 0) return format_double(x);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, x);
    return std::string(buf);
}

// ---------------------------------------------------------------------------
// parallel_for
// ---------------------------------------------------------------------------
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace rdepth
