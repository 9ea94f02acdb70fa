#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace scalemix {

// Stream tags used in derivation paths. A path is {replication, tag, index...}.
enum StreamTag : std::uint64_t {
    kStreamY = 0,
    kStreamT = 1,
    kStreamTheory = 2,
    kStreamAux = 3,
};

constexpr std::uint64_t kDefaultSeed = 20120701;

// Deterministic generator keyed by (master seed, path). Two different paths give
// statistically independent streams; the same key always gives the same stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed, const std::vector<std::uint64_t>& path = {});

    // Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    // Uniform on the open interval (0,1).
    double uniform_open() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }
    double exponential();
    std::uint64_t bits() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace scalemix
