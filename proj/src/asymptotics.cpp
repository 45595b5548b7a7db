#include "modeseek/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace modeseek {

LimitPrediction predict_first_iterate_limit(const Dataset& points, const KernelProfile& profile,
                                            std::size_t seed_index) {
    if (points.n == 0) throw std::invalid_argument("limit prediction: empty dataset");
    if (seed_index >= points.n)
        throw std::invalid_argument("limit prediction: seed index out of range");
    const std::size_t d = points.d;

    LimitPrediction pred;
    const std::optional<double> beta = powerlaw_exponent(profile);
    if (!beta) {
        pred.kind = LimitKind::GlobalMean;
        pred.point.assign(d, 0.0);
        for (std::size_t i = 0; i < points.n; ++i) {
            const auto xi = points.point(i);
            for (std::size_t j = 0; j < d; ++j) pred.point[j] += xi[j];
        }
        for (std::size_t j = 0; j < d; ++j) pred.point[j] /= static_cast<double>(points.n);
        return pred;
    }

    pred.kind = LimitKind::PowerLawLocalMean;
    pred.p = 2.0 * *beta;
    pred.point.assign(d, 0.0);
    double denom = 0.0;
    const auto seed = points.point(seed_index);
    for (std::size_t i = 0; i < points.n; ++i) {
        if (i == seed_index) continue;
        const auto xi = points.point(i);
        const double dist = std::sqrt(squared_distance(seed, xi));
        if (dist == 0.0)
            throw std::invalid_argument(
                "limit prediction: duplicate of the seed point under a singular profile");
        const double w = std::pow(dist, -*pred.p);
        for (std::size_t j = 0; j < d; ++j) pred.point[j] += w * xi[j];
        denom += w;
    }
    if (!(denom > 0.0))
        throw std::invalid_argument("limit prediction: needs at least one other point");
    for (std::size_t j = 0; j < d; ++j) pred.point[j] /= denom;
    return pred;
}

CmBoundReport cm_exponent_bound_check(const KernelProfile& profile,
                                      std::span<const double> grid) {
    CmBoundReport report;
    const double bound = profile.k0 / std::exp(1.0);
    report.holds = true;
    for (double r : grid) {
        if (!(r > 0.0))
            throw std::invalid_argument("cm bound check: grid values must be positive");
        const double rg = r * eval_g(profile, r);
        const double ratio = rg / bound;
        if (ratio > report.max_ratio) {
            report.max_ratio = ratio;
            report.worst_r = r;
        }
        if (rg > bound + 1e-12) report.holds = false;
    }
    return report;
}

Vec standard_probe_grid() {
    constexpr int kPoints = 60;
    Vec grid(kPoints);
    const double step = std::log(1e3 / 1e-6) / (kPoints - 1);
    for (int i = 0; i < kPoints; ++i) grid[i] = 1e-6 * std::exp(step * i);
    return grid;
}

} // namespace modeseek
