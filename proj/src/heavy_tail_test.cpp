#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>

#include "scalemix/heavy_tail_test.hpp"
#include "scalemix/numerics.hpp"

namespace scalemix {

namespace {
#include "ht_critical_values.inc"
}  // namespace

double heavy_tail_critical_value(std::size_t k, double level) {
    if (k < kHeavyTailMinK) throw std::invalid_argument("heavy-tail test: k must be at least 5");
    std::size_t col = 0;
    if (std::abs(level - 0.10) < 1e-12) col = 0;
    else if (std::abs(level - 0.05) < 1e-12) col = 1;
    else if (std::abs(level - 0.01) < 1e-12) col = 2;
    else throw std::invalid_argument("heavy-tail test: level must be 0.10, 0.05 or 0.01");
    const std::size_t m = std::size(kHtK);
    if (k >= kHtK[m - 1]) return kHtCrit[m - 1][col];
    std::size_t i = 0;
    while (kHtK[i + 1] < k) ++i;
    const double a = std::log(static_cast<double>(kHtK[i])), b = std::log(static_cast<double>(kHtK[i + 1]));
    const double f = (std::log(static_cast<double>(k)) - a) / (b - a);
    return kHtCrit[i][col] + f * (kHtCrit[i + 1][col] - kHtCrit[i][col]);
}

EstimatorTrace heavy_tail_test(std::span<const double> x, const std::vector<std::size_t>& ks, double level) {
    if (ks.empty()) throw std::invalid_argument("heavy-tail test: empty k grid");
    const auto s = sorted_copy(x);
    const std::size_t n = s.size();
    EstimatorTrace t;
    std::vector<double> logs;
    for (auto k : ks) {
        if (k < kHeavyTailMinK || k >= n) throw std::invalid_argument("heavy-tail test: insufficient data for k");
        if (!t.k.empty() && k <= t.k.back()) throw std::invalid_argument("heavy-tail test: k grid must increase");
        const double base = s[n - 1 - k];
        if (!(base > 0.0)) throw std::domain_error("heavy-tail test: top k+1 order statistics must be positive");
        logs.resize(k);
        for (std::size_t i = 0; i < k; ++i) logs[i] = std::log(s[n - 1 - i] / base);
        const double stat = heavy_tail_statistic_from_logs(logs);
        const double crit = heavy_tail_critical_value(k, level);
        t.k.push_back(k);
        t.value.push_back(stat);
        t.band.push_back(crit);
        t.reject.push_back(stat > crit);
    }
    return t;
}

}  // namespace scalemix
