#include "scalemix/rng.hpp"

#include <cmath>

namespace scalemix {

Rng::Rng(std::uint64_t seed, const std::vector<std::uint64_t>& path) {
    std::vector<std::uint32_t> words;
    words.reserve(2 * (path.size() + 1) + 1);
    auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    // The length word keeps {a} and {a, 0} apart.
    words.push_back(static_cast<std::uint32_t>(path.size()));
    for (auto p : path) push(p);
    std::seed_seq seq(words.begin(), words.end());
    eng_.seed(seq);
}

double Rng::exponential() { return -std::log(uniform_open()); }

}  // namespace scalemix
