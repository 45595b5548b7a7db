#include "modeseek/kernel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace modeseek {

namespace {

void require_positive(double value, const char* what) {
    if (!(value > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

} // namespace

KernelProfile KernelProfile::gaussian() {
    return KernelProfile{KernelFamily::Gaussian, 1.0, 1.0, 1.0};
}

KernelProfile KernelProfile::laplace(double lambda) {
    require_positive(lambda, "laplace lambda");
    return KernelProfile{KernelFamily::Laplace, lambda, 0.5, 1.0};
}

KernelProfile KernelProfile::stretched_exp(double lambda, double alpha) {
    require_positive(lambda, "stretched lambda");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("stretched alpha must lie in (0, 1]");
    return KernelProfile{KernelFamily::StretchedExp, lambda, alpha, 1.0};
}

KernelProfile KernelProfile::cauchy_from_p(double p) {
    if (!(p > 0.0 && p < 2.0))
        throw std::invalid_argument("cauchy P must lie in (0, 2)");
    return KernelProfile{KernelFamily::CauchyType, 1.0, 1.0 - p / 2.0, 1.0};
}

KernelProfile KernelProfile::cauchy_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("cauchy alpha must lie in (0, 1]");
    return KernelProfile{KernelFamily::CauchyType, 1.0, alpha, 1.0};
}

bool KernelProfile::singular_at_zero() const {
    switch (family) {
        case KernelFamily::Gaussian: return false;
        case KernelFamily::Laplace: return true;
        case KernelFamily::StretchedExp:
        case KernelFamily::CauchyType: return alpha < 1.0;
    }
    return false;
}

std::string KernelProfile::spec_string() const {
    char buf[64];
    switch (family) {
        case KernelFamily::Gaussian:
            return "gaussian";
        case KernelFamily::Laplace:
            std::snprintf(buf, sizeof buf, "laplace:%.17g", lambda);
            return buf;
        case KernelFamily::StretchedExp:
            std::snprintf(buf, sizeof buf, "stretched:%.17g,%.17g", lambda, alpha);
            return buf;
        case KernelFamily::CauchyType:
            std::snprintf(buf, sizeof buf, "cauchy:%.17g", 2.0 * (1.0 - alpha));
            return buf;
    }
    return "";
}

double eval_k(const KernelProfile& profile, double q) {
    if (q < 0.0) throw std::domain_error("eval_k: q must be nonnegative");
    switch (profile.family) {
        case KernelFamily::Gaussian:
            return std::exp(-q / 2.0);
        case KernelFamily::Laplace:
            return std::exp(-profile.lambda * std::sqrt(q));
        case KernelFamily::StretchedExp:
            return std::exp(-profile.lambda * std::pow(q, profile.alpha));
        case KernelFamily::CauchyType:
            return 1.0 / (1.0 + std::pow(q, profile.alpha));
    }
    return 0.0;
}

double eval_g(const KernelProfile& profile, double q) {
    if (!(q > 0.0)) throw std::domain_error("eval_g: q must be positive");
    const double lambda = profile.lambda;
    const double alpha = profile.alpha;
    switch (profile.family) {
        case KernelFamily::Gaussian:
            return 0.5 * std::exp(-q / 2.0);
        case KernelFamily::Laplace: {
            const double s = std::sqrt(q);
            return lambda / (2.0 * s) * std::exp(-lambda * s);
        }
        case KernelFamily::StretchedExp:
            return lambda * alpha * std::pow(q, alpha - 1.0) *
                   std::exp(-lambda * std::pow(q, alpha));
        case KernelFamily::CauchyType: {
            const double u = std::pow(q, alpha);
            const double denom = 1.0 + u;
            return alpha * std::pow(q, alpha - 1.0) / (denom * denom);
        }
    }
    return 0.0;
}

double eval_k2(const KernelProfile& profile, double q) {
    if (!(q > 0.0)) throw std::domain_error("eval_k2: q must be positive");
    const double lambda = profile.lambda;
    const double alpha = profile.alpha;
    switch (profile.family) {
        case KernelFamily::Gaussian:
            return 0.25 * std::exp(-q / 2.0);
        case KernelFamily::Laplace: {
            const double s = std::sqrt(q);
            return (lambda / 4.0 * std::pow(q, -1.5) + lambda * lambda / (4.0 * q)) *
                   std::exp(-lambda * s);
        }
        case KernelFamily::StretchedExp: {
            const double u = std::pow(q, alpha);
            return lambda * alpha * std::exp(-lambda * u) *
                   ((1.0 - alpha) * std::pow(q, alpha - 2.0) +
                    lambda * alpha * std::pow(q, 2.0 * alpha - 2.0));
        }
        case KernelFamily::CauchyType: {
            const double u = std::pow(q, alpha);
            const double denom = 1.0 + u;
            return alpha * std::pow(q, alpha - 2.0) *
                   ((1.0 - alpha) + (1.0 + alpha) * u) / (denom * denom * denom);
        }
    }
    return 0.0;
}

std::optional<double> powerlaw_exponent(const KernelProfile& profile) {
    switch (profile.family) {
        case KernelFamily::Gaussian:
            return std::nullopt;
        case KernelFamily::Laplace:
            return 0.5;
        case KernelFamily::StretchedExp:
        case KernelFamily::CauchyType:
            if (profile.alpha >= 1.0) return std::nullopt; // g(0) finite
            return 1.0 - profile.alpha;
    }
    return std::nullopt;
}

KernelProfile parse_kernel_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);

    auto parse_num = [&](const std::string& s) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("kernel spec: bad number '" + s + "' in '" + spec + "'");
        }
        if (pos != s.size())
            throw std::invalid_argument("kernel spec: bad number '" + s + "' in '" + spec + "'");
        return v;
    };

    if (name == "gaussian") {
        if (!args.empty()) throw std::invalid_argument("kernel spec: gaussian takes no parameters");
        return KernelProfile::gaussian();
    }
    if (name == "laplace") {
        return KernelProfile::laplace(args.empty() ? 1.0 : parse_num(args));
    }
    if (name == "stretched") {
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("kernel spec: stretched needs <lambda>,<alpha>");
        return KernelProfile::stretched_exp(parse_num(args.substr(0, comma)),
                                            parse_num(args.substr(comma + 1)));
    }
    if (name == "cauchy") {
        if (args.empty()) throw std::invalid_argument("kernel spec: cauchy needs <P>");
        return KernelProfile::cauchy_from_p(parse_num(args));
    }
    throw std::invalid_argument("unknown kernel spec '" + spec + "'");
}

const char* family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::Gaussian: return "gaussian";
        case KernelFamily::Laplace: return "laplace";
        case KernelFamily::StretchedExp: return "stretched";
        case KernelFamily::CauchyType: return "cauchy";
    }
    return "?";
}

} // namespace modeseek
