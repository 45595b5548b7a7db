#pragma once

#include "modeseek/dataset.hpp"
#include "modeseek/kernel.hpp"

#include <optional>
#include <span>

namespace modeseek {

enum class LimitKind { GlobalMean, PowerLawLocalMean };

/// Closed-form limit of the first mean-shift iterate as h -> infinity.
/// Profiles with finite g(0) collapse to the global sample mean (all n
/// points, seed included); profiles with a power-law singularity of g at 0
/// give the inverse-distance-power weighted mean over j != i, p = 2 beta.
struct LimitPrediction {
    LimitKind kind = LimitKind::GlobalMean;
    std::optional<double> p; // distance exponent, PowerLawLocalMean only
    Vec point;
};

LimitPrediction predict_first_iterate_limit(const Dataset& points, const KernelProfile& profile,
                                            std::size_t seed_index);

/// Checks r * g(r) <= k(0)/e + 1e-12 over the grid; max_ratio reports
/// max of r * g(r) * e / k(0).
struct CmBoundReport {
    bool holds = false;
    double max_ratio = 0.0;
    double worst_r = 0.0;
};

CmBoundReport cm_exponent_bound_check(const KernelProfile& profile,
                                      std::span<const double> grid);

/// Logarithmic grid of 60 points spanning [1e-6, 1e3].
Vec standard_probe_grid();

} // namespace modeseek
