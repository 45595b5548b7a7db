#include "modeseek/bandwidth.hpp"

#include <cmath>
#include <stdexcept>

namespace modeseek {

namespace {

constexpr double kScanLo = 1e-9;
constexpr double kScanHi = 1e9;
constexpr int kScanPoints = 181;
constexpr double kRootTol = 1e-10;
constexpr double kOnGridRootTol = 1e-12;

// Bisects phi(q) = 1 on [lo, hi]; requires opposite signs of phi - 1 at the ends.
std::optional<double> bisect_threshold(const KernelProfile& profile, double lo, double hi) {
    double flo = phi(profile, lo) - 1.0;
    for (int iter = 0; iter < 400; ++iter) {
        const double mid = std::sqrt(lo * hi); // geometric midpoint suits the log-scale grid
        const double fmid = phi(profile, mid) - 1.0;
        if (std::abs(fmid) <= kRootTol) return mid;
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-16 * lo) break;
    }
    const double mid = 0.5 * (lo + hi);
    if (std::abs(phi(profile, mid) - 1.0) <= kRootTol) return mid;
    return std::nullopt;
}

} // namespace

const char* to_string(ThresholdClass c) {
    switch (c) {
        case ThresholdClass::FiniteRoot: return "FiniteRoot";
        case ThresholdClass::ConditionAlwaysHolds: return "ConditionAlwaysHolds";
        case ThresholdClass::ConditionNeverHolds: return "ConditionNeverHolds";
        case ThresholdClass::Indeterminate: return "Indeterminate";
    }
    return "?";
}

double phi(const KernelProfile& profile, double q) {
    if (!(q > 0.0)) throw std::domain_error("phi: q must be positive");
    const double lambda = profile.lambda;
    const double alpha = profile.alpha;
    switch (profile.family) {
        case KernelFamily::Gaussian:
            return q;
        case KernelFamily::Laplace:
            return 1.0 + lambda * std::sqrt(q);
        case KernelFamily::StretchedExp:
            return 2.0 * (1.0 - alpha) + 2.0 * lambda * alpha * std::pow(q, alpha);
        case KernelFamily::CauchyType: {
            const double u = std::pow(q, alpha);
            return 2.0 * alpha * (1.0 - alpha + u) / (1.0 + u);
        }
    }
    return 0.0;
}

BandwidthReport solve_h0(const KernelProfile& profile, double xmax_norm) {
    if (xmax_norm < 0.0) throw std::invalid_argument("solve_h0: xmax_norm must be nonnegative");

    BandwidthReport report;
    report.xmax_norm = xmax_norm;
    report.phi_samples.reserve(kScanPoints);

    const double step = std::log(kScanHi / kScanLo) / (kScanPoints - 1);
    for (int i = 0; i < kScanPoints; ++i) {
        const double q = kScanLo * std::exp(step * i);
        report.phi_samples.emplace_back(q, phi(profile, q));
    }

    bool all_below = true;
    bool all_above = true;
    std::optional<double> root;
    for (int i = 0; i < kScanPoints && !root; ++i) {
        const double f = report.phi_samples[i].second - 1.0;
        if (f < 0.0) all_above = false;
        if (f > 0.0) all_below = false;
        if (std::abs(f) <= kOnGridRootTol) {
            // Grid point lands on the root itself; refine across its neighbors.
            const double lo = i > 0 ? report.phi_samples[i - 1].first : report.phi_samples[i].first;
            const double hi = i + 1 < kScanPoints ? report.phi_samples[i + 1].first
                                                  : report.phi_samples[i].first;
            const double flo = phi(profile, lo) - 1.0;
            const double fhi = phi(profile, hi) - 1.0;
            if ((flo < 0.0) != (fhi < 0.0))
                root = bisect_threshold(profile, lo, hi);
            else
                root = report.phi_samples[i].first; // tangency candidate, vetted below
        } else if (i + 1 < kScanPoints) {
            const double fnext = report.phi_samples[i + 1].second - 1.0;
            if (std::abs(fnext) > kOnGridRootTol && (f < 0.0) != (fnext < 0.0))
                root = bisect_threshold(profile, report.phi_samples[i].first,
                                        report.phi_samples[i + 1].first);
        }
    }

    if (root) {
        const double q0 = *root;
        const bool genuine_crossing =
            ((phi(profile, q0 / 2.0) - 1.0) < 0.0) != ((phi(profile, 2.0 * q0) - 1.0) < 0.0);
        if (!genuine_crossing || std::abs(phi(profile, q0) - 1.0) > kRootTol) {
            report.classification = ThresholdClass::Indeterminate;
            return report;
        }
        report.classification = ThresholdClass::FiniteRoot;
        report.q0 = q0;
        report.h0 = 2.0 * xmax_norm / std::sqrt(q0);
        return report;
    }

    if (all_below)
        report.classification = ThresholdClass::ConditionAlwaysHolds;
    else if (all_above)
        report.classification = ThresholdClass::ConditionNeverHolds;
    else
        report.classification = ThresholdClass::Indeterminate;
    return report;
}

} // namespace modeseek
