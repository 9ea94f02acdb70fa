#include "scalemix/sample_path.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace scalemix {

SamplePath::SamplePath(std::size_t n, std::size_t d, std::vector<double> values,
                       std::uint64_t seed, std::string spec_hash)
    : n_(n), d_(d), v_(std::move(values)), seed_(seed), hash_(std::move(spec_hash)) {
    if (n_ == 0 || d_ == 0) throw std::invalid_argument("SamplePath: empty shape");
    if (v_.size() != n_ * d_) throw std::invalid_argument("SamplePath: size does not match n*d");
}

SamplePath SamplePath::from_column(std::vector<double> values, std::uint64_t seed,
                                   std::string spec_hash) {
    const auto n = values.size();
    return SamplePath(n, 1, std::move(values), seed, std::move(spec_hash));
}

std::vector<double> SamplePath::column(std::size_t j) const {
    if (j >= d_) throw std::out_of_range("SamplePath::column");
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = v_[i * d_ + j];
    return out;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    if (b < e && s[b] == '+') ++b;
    double v = 0.0;
    auto res = std::from_chars(s.data() + b, s.data() + e, v);
    if (res.ec != std::errc() || res.ptr != s.data() + e || b == e)
        throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

void write_csv(std::ostream& os, const SamplePath& path) {
    os << "t";
    for (std::size_t j = 0; j < path.cols(); ++j) os << ",x" << (j + 1);
    os << '\n';
    for (std::size_t i = 0; i < path.rows(); ++i) {
        os << (i + 1);
        for (std::size_t j = 0; j < path.cols(); ++j) os << ',' << format_double(path(i, j));
        os << '\n';
    }
}

SamplePath read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_csv: empty input");
    std::size_t d = 0;
    for (char ch : line)
        if (ch == ',') ++d;
    if (d == 0) throw std::runtime_error("read_csv: header needs t and at least one column");
    std::vector<double> v;
    std::size_t n = 0, lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');  // t
        std::size_t got = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                v.push_back(parse_double(cell));
            } catch (const std::invalid_argument&) {
                throw std::runtime_error("read_csv: line " + std::to_string(lineno) + ": bad value");
            }
            ++got;
        }
        if (got != d)
            throw std::runtime_error("read_csv: line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(d) + " values");
        ++n;
    }
    if (n == 0) throw std::runtime_error("read_csv: no rows");
    return SamplePath(n, d, std::move(v));
}

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("read_binary: truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

void write_binary(std::ostream& os, const SamplePath& path) {
    put_u64(os, path.rows());
    put_u64(os, path.cols());
    for (double x : path.data()) put_u64(os, std::bit_cast<std::uint64_t>(x));
}

SamplePath read_binary(std::istream& is) {
    const auto n = get_u64(is);
    const auto d = get_u64(is);
    if (n == 0 || d == 0 || n > (1ull << 40) / d) throw std::runtime_error("read_binary: bad header");
    std::vector<double> v(n * d);
    for (auto& x : v) x = std::bit_cast<double>(get_u64(is));
    return SamplePath(n, d, std::move(v));
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace scalemix
