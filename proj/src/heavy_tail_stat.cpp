#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "scalemix/heavy_tail_test.hpp"
#include "scalemix/rng.hpp"

namespace scalemix {

namespace {

// Antiderivatives of t^2, t^2 log t and t^2 log^2 t (all vanish at 0).
double p0(double t) { return t * t * t / 3.0; }
double p1(double t) { return t > 0.0 ? t * t * t * (std::log(t) / 3.0 - 1.0 / 9.0) : 0.0; }
double p2(double t) {
    if (!(t > 0.0)) return 0.0;
    const double l = std::log(t);
    return t * t * t * (l * l / 3.0 - 2.0 * l / 9.0 + 2.0 / 27.0);
}

struct PieceWeights {
    std::vector<double> i0, i1, i2;
};

PieceWeights piece_weights(std::size_t k) {
    PieceWeights w;
    const double kk = static_cast<double>(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double a = static_cast<double>(i) / kk, b = static_cast<double>(i + 1) / kk;
        w.i0.push_back(p0(b) - p0(a));
        w.i1.push_back(p1(b) - p1(a));
        w.i2.push_back(p2(b) - p2(a));
    }
    return w;
}

double statistic(std::span<const double> logs, const PieceWeights& w) {
    const std::size_t k = logs.size();
    double g = 0.0;
    for (double v : logs) g += v;
    g /= static_cast<double>(k);
    if (!(g > 0.0)) throw std::domain_error("heavy-tail statistic: degenerate upper tail");
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double a = logs[i] / g;
        acc += a * a * w.i0[i] + 2.0 * a * w.i1[i] + w.i2[i];
    }
    return static_cast<double>(k) * acc;
}

}  // namespace

double heavy_tail_statistic_from_logs(std::span<const double> logs) {
    if (logs.size() < 2) throw std::invalid_argument("heavy-tail statistic: need k >= 2");
    return statistic(logs, piece_weights(logs.size()));
}

double heavy_tail_statistic(std::span<const double> x, std::size_t k) {
    if (k < 2 || k >= x.size()) throw std::invalid_argument("heavy-tail statistic: need 2 <= k < n");
    std::vector<double> s(x.begin(), x.end());
    std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k), s.end(), std::greater<>());
    const double base = s[k];
    if (!(base > 0.0)) throw std::domain_error("heavy-tail statistic: top k+1 order statistics must be positive");
    std::vector<double> logs(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(logs.begin(), logs.end(), std::greater<>());
    for (double& v : logs) v = std::log(v / base);
    return heavy_tail_statistic_from_logs(logs);
}

std::vector<double> simulate_null_statistic(std::size_t k, std::size_t reps, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("heavy-tail null: need k >= 2");
    const auto w = piece_weights(k);
    Rng rng(seed, {0, kStreamAux, k});
    std::vector<double> out(reps), logs(k);
    for (std::size_t r = 0; r < reps; ++r) {
        // Renyi: log-excesses of the top k over the (k+1)-th are partial sums of E_j / j.
        double acc = 0.0;
        for (std::size_t j = k; j >= 1; --j) {
            acc += rng.exponential() / static_cast<double>(j);
            logs[j - 1] = acc;
        }
        out[r] = statistic(logs, w);
    }
    return out;
}

}  // namespace scalemix
