#include "modeseek/meanshift.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace modeseek {

void MeanShiftConfig::validate(std::size_t n) const {
    if (!(h > 0.0)) throw std::invalid_argument("mean shift: bandwidth must be positive");
    if (!(conv_tol > 0.0)) throw std::invalid_argument("mean shift: conv_tol must be positive");
    if (max_iter <= 0) throw std::invalid_argument("mean shift: max_iter must be positive");
    if (!(eps_q > 0.0)) throw std::invalid_argument("mean shift: eps_q must be positive");
    if (merge_tol < 0.0) throw std::invalid_argument("mean shift: merge_tol must be nonnegative");
    if (knn && (*knn == 0 || *knn > n))
        throw std::invalid_argument("mean shift: knn must lie in [1, n]");
}

unsigned resolve_thread_count(unsigned configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("MODESEEK_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

namespace {

// Indices of the k candidates nearest to y; ties break toward lower index.
void select_knn(const Dataset& points, std::span<const double> y,
                std::optional<std::size_t> excluded, std::size_t k,
                std::vector<std::pair<double, std::size_t>>& scratch,
                std::vector<std::size_t>& out) {
    scratch.clear();
    for (std::size_t i = 0; i < points.n; ++i) {
        if (excluded && i == *excluded) continue;
        scratch.emplace_back(squared_distance(y, points.point(i)), i);
    }
    k = std::min(k, scratch.size());
    std::partial_sort(scratch.begin(), scratch.begin() + k, scratch.end());
    out.clear();
    for (std::size_t j = 0; j < k; ++j) out.push_back(scratch[j].second);
}

struct StepWorkspace {
    std::vector<std::pair<double, std::size_t>> scratch;
    std::vector<std::size_t> neighbors;
};

Vec weighted_mean_step(const Dataset& points, const KernelProfile& profile,
                       const MeanShiftConfig& config, std::optional<std::size_t> seed_index,
                       std::span<const double> y, StepWorkspace& ws) {
    const std::size_t d = points.d;
    const double h2 = config.h * config.h;
    const std::optional<std::size_t> excluded =
        config.exclude_self ? seed_index : std::nullopt;

    Vec numer(d, 0.0);
    double denom = 0.0;
    std::size_t terms = 0;

    auto accumulate = [&](std::size_t i) {
        const auto xi = points.point(i);
        const double q = std::max(squared_distance(y, xi) / h2, config.eps_q);
        const double w = eval_g(profile, q);
        for (std::size_t j = 0; j < d; ++j) numer[j] += w * xi[j];
        denom += w;
        ++terms;
    };

    if (config.knn) {
        select_knn(points, y, excluded, *config.knn, ws.scratch, ws.neighbors);
        for (std::size_t i : ws.neighbors) accumulate(i);
    } else {
        for (std::size_t i = 0; i < points.n; ++i) {
            if (excluded && i == *excluded) continue;
            accumulate(i);
        }
    }

    if (terms == 0 || !(denom > 0.0) || !std::isfinite(denom))
        throw degenerate_step_error("mean shift step: no positive weights remain");

    for (std::size_t j = 0; j < d; ++j) numer[j] /= denom;
    return numer;
}

} // namespace

Vec ms_step(const Dataset& points, const KernelProfile& profile, const MeanShiftConfig& config,
            std::optional<std::size_t> seed_index, std::span<const double> y) {
    config.validate(points.n);
    if (points.n == 0) throw std::invalid_argument("mean shift: empty dataset");
    if (y.size() != points.d) throw std::invalid_argument("mean shift: dimension mismatch");
    StepWorkspace ws;
    return weighted_mean_step(points, profile, config, seed_index, y, ws);
}

SeedRun run_from_seed(const Dataset& points, const KernelProfile& profile,
                      const MeanShiftConfig& config, std::size_t seed_index) {
    config.validate(points.n);
    if (seed_index >= points.n) throw std::invalid_argument("mean shift: seed index out of range");

    SeedRun run;
    const auto seed = points.point(seed_index);
    Vec y(seed.begin(), seed.end());
    if (config.record_trajectories) run.trajectory.push_back(y);

    StepWorkspace ws;
    for (int iter = 0; iter < config.max_iter; ++iter) {
        Vec next;
        try {
            next = weighted_mean_step(points, profile, config, seed_index, y, ws);
        } catch (const degenerate_step_error&) {
            run.endpoint = std::move(y);
            run.iterations = iter;
            run.converged = false;
            return run;
        }
        double step2 = 0.0;
        for (std::size_t j = 0; j < points.d; ++j) {
            const double diff = next[j] - y[j];
            step2 += diff * diff;
        }
        y = std::move(next);
        run.iterations = iter + 1;
        if (config.record_trajectories) run.trajectory.push_back(y);
        if (step2 <= config.conv_tol * config.conv_tol) {
            run.converged = true;
            break;
        }
    }
    run.endpoint = std::move(y);
    return run;
}

RunResult run_all(const Dataset& points, const KernelProfile& profile,
                  const MeanShiftConfig& config) {
    config.validate(points.n);
    const std::size_t n = points.n;

    std::vector<SeedRun> runs(n);
    const unsigned workers = std::min<unsigned>(resolve_thread_count(config.threads),
                                                static_cast<unsigned>(n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            runs[i] = run_from_seed(points, profile, config, i);
    } else {
        std::atomic<std::size_t> cursor{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= n) return;
                runs[i] = run_from_seed(points, profile, config, i);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    RunResult result;
    result.endpoints.reserve(n);
    result.iterations.reserve(n);
    result.converged_flags.reserve(n);
    for (auto& run : runs) {
        result.endpoints.push_back(std::move(run.endpoint));
        result.iterations.push_back(run.iterations);
        result.converged_flags.push_back(run.converged);
        if (config.record_trajectories) result.trajectories.push_back(std::move(run.trajectory));
    }

    // Greedy first-fit merge in seed order with running-mean representatives.
    result.assignment.assign(n, -1);
    std::vector<std::size_t> member_counts;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& endpoint = result.endpoints[i];
        int found = -1;
        for (std::size_t m = 0; m < result.merged_modes.size(); ++m) {
            if (std::sqrt(squared_distance(endpoint, result.merged_modes[m])) <=
                config.merge_tol) {
                found = static_cast<int>(m);
                break;
            }
        }
        if (found < 0) {
            result.merged_modes.push_back(endpoint);
            member_counts.push_back(1);
            result.assignment[i] = static_cast<int>(result.merged_modes.size()) - 1;
        } else {
            Vec& rep = result.merged_modes[found];
            const double count = static_cast<double>(++member_counts[found]);
            for (std::size_t j = 0; j < points.d; ++j)
                rep[j] += (endpoint[j] - rep[j]) / count;
            result.assignment[i] = found;
        }
    }
    result.cluster_sizes.assign(member_counts.begin(), member_counts.end());
    return result;
}

} // namespace modeseek
