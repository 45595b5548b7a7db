#pragma once

#include "modeseek/dataset.hpp"
#include "modeseek/kernel.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace modeseek {

struct MeanShiftConfig {
    double h = 1.0;            // bandwidth
    double conv_tol = 1e-8;    // stop when ||y_{j+1} - y_j|| <= conv_tol
    int max_iter = 10000;
    bool exclude_self = false; // drop the seed's own index from every step's sums
    double eps_q = 1e-12;      // squared-distance floor before evaluating g
    double merge_tol = 0.05;   // endpoint merge radius
    std::optional<std::size_t> knn; // restrict sums to k nearest neighbors of the iterate
    unsigned threads = 0;      // 0 = library default
    bool record_trajectories = false;

    void validate(std::size_t n) const;
};

/// Raised when every term of the weighted mean is excluded or has zero weight.
struct degenerate_step_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeedRun {
    Vec endpoint;
    int iterations = 0;
    bool converged = false;
    std::vector<Vec> trajectory; // includes the seed, filled only when recording
};

struct RunResult {
    std::vector<Vec> endpoints;
    std::vector<int> iterations;
    std::vector<bool> converged_flags;
    std::vector<std::vector<Vec>> trajectories; // empty unless recorded
    std::vector<Vec> merged_modes;
    std::vector<int> assignment;
    std::vector<int> cluster_sizes;
};

/// One fixed-point update: the g-weighted mean of the (possibly
/// kNN-restricted, possibly self-excluded) data points.
Vec ms_step(const Dataset& points, const KernelProfile& profile, const MeanShiftConfig& config,
            std::optional<std::size_t> seed_index, std::span<const double> y);

/// Iterates ms_step from points[seed_index] until the step norm falls below
/// conv_tol or max_iter is reached. A degenerate step marks the seed
/// non-converged instead of propagating.
SeedRun run_from_seed(const Dataset& points, const KernelProfile& profile,
                      const MeanShiftConfig& config, std::size_t seed_index);

/// Runs every seed (in parallel, collected in seed order) and merges
/// endpoints greedily: first existing mode within merge_tol wins, and the
/// mode representative is the running mean of its members. Deterministic
/// given the input order, independent of the worker count.
RunResult run_all(const Dataset& points, const KernelProfile& profile,
                  const MeanShiftConfig& config);

/// Worker count actually used for a configured value (env MODESEEK_THREADS
/// is the fallback when config.threads == 0).
unsigned resolve_thread_count(unsigned configured);

} // namespace modeseek
