#pragma once

#include "modeseek/dataset.hpp"
#include "modeseek/kernel.hpp"
#include "modeseek/linalg.hpp"

#include <span>

namespace modeseek {

/// Squared-distance regularization floor applied before evaluating g or k''.
inline constexpr double kEpsQ = 1e-12;

/// KDE value, gradient and Hessian at a point, together with the C(x)/A(x)
/// decomposition H = -(C/h^2) I + A/h^4 (normalization constant fixed to 1;
/// signs, ranks and fixed points are invariant to positive scaling).
///   C(x) = -2 sum_i k'(q_i) > 0
///   A(x) =  4 sum_i (x - x_i)(x - x_i)^T k''(q_i), PSD
struct DensityEval {
    double f = 0.0;
    Vec grad;
    SymMat hessian;
    double C = 0.0;
    SymMat A;
};

double kde(const Dataset& points, const KernelProfile& profile, double h,
           std::span<const double> x);

Vec kde_gradient(const Dataset& points, const KernelProfile& profile, double h,
                 std::span<const double> x);

DensityEval kde_hessian(const Dataset& points, const KernelProfile& profile, double h,
                        std::span<const double> x);

/// Spectral full-rank diagnostic at a candidate stationary point.
struct RankDiagnostic {
    Vec eigenvalues; // Hessian eigenvalues, descending
    double min_abs_eigenvalue = 0.0;
    double lambda_max_A_over_h2 = 0.0;
    double C = 0.0;
    bool certificate = false; // lambda_max(A/h^2) < C
    bool inside_bbox = true;  // necessary condition for hull membership
};

RankDiagnostic hessian_rank_diagnostic(const Dataset& points, const KernelProfile& profile,
                                       double h, std::span<const double> xstar);

} // namespace modeseek
