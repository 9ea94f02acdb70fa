#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace scalemix {

// n x d row-major array of realizations. Immutable once built.
class SamplePath {
public:
    SamplePath() = default;
    SamplePath(std::size_t n, std::size_t d, std::vector<double> values,
               std::uint64_t seed = 0, std::string spec_hash = {});

    static SamplePath from_column(std::vector<double> values, std::uint64_t seed = 0,
                                  std::string spec_hash = {});

    [[nodiscard]] std::size_t rows() const { return n_; }
    [[nodiscard]] std::size_t cols() const { return d_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return v_[i * d_ + j]; }
    [[nodiscard]] std::vector<double> column(std::size_t j) const;
    [[nodiscard]] const std::vector<double>& data() const { return v_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] const std::string& spec_hash() const { return hash_; }

private:
    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::vector<double> v_;
    std::uint64_t seed_ = 0;
    std::string hash_;
};

// Shortest round-trip decimal representation.
std::string format_double(double x);
double parse_double(const std::string& s);

// CSV with header "t,x1,...,xd", t counting from 1.
void write_csv(std::ostream& os, const SamplePath& path);
SamplePath read_csv(std::istream& is);

// 16-byte little-endian header (uint64 n, uint64 d) followed by n*d little-endian doubles.
void write_binary(std::ostream& os, const SamplePath& path);
SamplePath read_binary(std::istream& is);

// FNV-1a, used to tag paths with the spec that produced them.
std::string fnv1a_hex(const std::string& text);

}  // namespace scalemix
