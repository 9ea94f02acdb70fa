// Writes the heavy-tail test critical-value table included by heavy_tail_test.cpp.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "scalemix/heavy_tail_test.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: gen_ht_table <output.inc>\n";
        return 1;
    }
    const std::size_t ks[] = {5, 7, 10, 15, 20, 30, 50, 75, 100, 150, 200, 300, 500, 750, 1000, 1500, 2000, 3000, 5000};
    const double levels[] = {0.10, 0.05, 0.01};
    const std::size_t reps = 20000;
    std::ofstream out(argv[1]);
    out << "// Generated by gen_ht_table: " << reps << " null draws per k.\n";
    out << "constexpr std::size_t kHtK[] = {";
    for (std::size_t i = 0; i < std::size(ks); ++i) out << (i ? ", " : "") << ks[i];
    out << "};\nconstexpr double kHtCrit[][3] = {\n";
    char buf[64];
    for (auto k : ks) {
        auto draws = scalemix::simulate_null_statistic(k, reps, 20020101);
        std::sort(draws.begin(), draws.end());
        out << "    {";
        for (std::size_t l = 0; l < 3; ++l) {
            const auto idx = static_cast<std::size_t>(std::ceil((1.0 - levels[l]) * reps)) - 1;
            std::snprintf(buf, sizeof buf, "%.17g", draws[idx]);
            out << (l ? ", " : "") << buf;
        }
        out << "},\n";
    }
    out << "};\n";
    return out ? 0 : 1;
}
