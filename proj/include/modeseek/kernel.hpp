#pragma once

#include <optional>
#include <string>

namespace modeseek {

enum class KernelFamily { Gaussian, Laplace, StretchedExp, CauchyType };

/// A radial kernel profile k(q) on q in [0, inf) with exact first and second
/// derivatives. The weight used by the mean-shift update is g(q) = -k'(q).
///
/// Families:
///   Gaussian      k(q) = exp(-q/2)
///   Laplace       k(q) = exp(-lambda * sqrt(q))
///   StretchedExp  k(q) = exp(-lambda * q^alpha),  alpha in (0, 1]
///   CauchyType    k(q) = 1 / (1 + q^alpha),       alpha in (0, 1]
///
/// Profiles are immutable value objects and safe to share across threads.
struct KernelProfile {
    KernelFamily family = KernelFamily::Gaussian;
    double lambda = 1.0; // Laplace / StretchedExp scale
    double alpha = 1.0;  // StretchedExp / CauchyType exponent
    double k0 = 1.0;     // k(0), by continuity where needed

    static KernelProfile gaussian();
    static KernelProfile laplace(double lambda = 1.0);
    static KernelProfile stretched_exp(double lambda, double alpha);
    /// CauchyType parameterized by the distance exponent P in (0,2): alpha = 1 - P/2.
    static KernelProfile cauchy_from_p(double p);
    static KernelProfile cauchy_alpha(double alpha);

    /// True when g(q) -> +inf as q -> 0+ (every family except Gaussian, and
    /// the alpha = 1 degenerate cases which have finite g(0)).
    bool singular_at_zero() const;

    /// Round-trips through parse_kernel_spec.
    std::string spec_string() const;
};

double eval_k(const KernelProfile& profile, double q);  // q >= 0
double eval_g(const KernelProfile& profile, double q);  // -k'(q), q > 0
double eval_k2(const KernelProfile& profile, double q); // k''(q), q > 0

/// Exponent beta of the power-law singularity g(r) = C r^{-beta} (1 + o(1))
/// as r -> 0, when one exists; absent when g(0) is finite.
std::optional<double> powerlaw_exponent(const KernelProfile& profile);

/// Parses `gaussian`, `laplace:<lambda>`, `stretched:<lambda>,<alpha>`,
/// `cauchy:<P>`. Throws std::invalid_argument on malformed specs.
KernelProfile parse_kernel_spec(const std::string& spec);

const char* family_name(KernelFamily family);

} // namespace modeseek
