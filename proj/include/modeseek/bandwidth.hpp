#pragma once

#include "modeseek/kernel.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace modeseek {

enum class ThresholdClass {
    FiniteRoot,           // phi crosses 1: threshold bandwidth h0 is finite
    ConditionAlwaysHolds, // phi < 1 on the whole scan: every h > 0 is certified
    ConditionNeverHolds,  // phi > 1 on the whole scan: no finite certificate
    Indeterminate,        // tangency or unresolved sign pattern
};

const char* to_string(ThresholdClass c);

/// Outcome of classifying/solving the threshold equation phi(q0) = 1 with
/// q0 = 4 ||x_max||^2 / h0^2. When a root exists, h0 = 2 ||x_max|| / sqrt(q0)
/// and every h > h0 keeps phi below 1.
struct BandwidthReport {
    ThresholdClass classification = ThresholdClass::Indeterminate;
    std::optional<double> q0;
    std::optional<double> h0;
    double xmax_norm = 0.0;
    std::vector<std::pair<double, double>> phi_samples; // (q, phi(q)) over the scan grid
};

/// Threshold function of the convergence condition phi(q) < 1, per family:
///   Gaussian      phi(q) = q
///   Laplace       phi(q) = 1 + lambda sqrt(q)
///   StretchedExp  phi(q) = 2(1-alpha) + 2 lambda alpha q^alpha
///   CauchyType    phi(q) = 2 alpha (1 - alpha + q^alpha) / (1 + q^alpha)
double phi(const KernelProfile& profile, double q);

/// Scans phi on a logarithmic grid q in [1e-9, 1e9] (181 points) and refines
/// any sign change of phi - 1 by bisection to |phi(q0) - 1| <= 1e-10.
BandwidthReport solve_h0(const KernelProfile& profile, double xmax_norm);

} // namespace modeseek
