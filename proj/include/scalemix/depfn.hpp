#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace scalemix {

enum class DepTag { Pickands, CaperaaFougeresGenest, HallTajvidi, LescourretRobert };

struct DependenceFnEstimate {
    std::vector<double> w;
    std::vector<double> pickands;
    std::vector<double> cfg;
    std::vector<double> ht;
    std::vector<double> lr;

    [[nodiscard]] const std::vector<double>& get(DepTag tag) const;
};

struct LrOptions {
    std::size_t k = 0;    // 0 means floor(n/15)
    double beta_x = 0.0;  // <= 0 means Hill estimate at k
    double beta_y = 0.0;
};

// m equally spaced points on [0,1], endpoints included.
std::vector<double> w_grid(std::size_t m);

// Raw (unconstrained) estimates at a single w.
double pickands_raw(std::span<const double> x, std::span<const double> y, double w);
double cfg_raw(std::span<const double> x, std::span<const double> y, double w);
double hall_tajvidi_raw(std::span<const double> x, std::span<const double> y, double w);
double lescourret_robert_raw(std::span<const double> x, std::span<const double> y, double w, const LrOptions& opt);

// Clamp to [max(w,1-w), 1] and average mirrored grid points, so A(w) = A(1-w)
// holds exactly on a symmetric grid.
std::vector<double> constrain_dependence(const std::vector<double>& w, const std::vector<double>& raw,
                                         const std::vector<double>& raw_mirror);

std::vector<double> depfn_single(std::span<const double> x, std::span<const double> y,
                                 const std::vector<double>& w, DepTag tag, const LrOptions& opt = {});
DependenceFnEstimate depfn_estimate(std::span<const double> x, std::span<const double> y,
                                    const std::vector<double>& w, const LrOptions& opt = {});

}  // namespace scalemix
