#include "modeseek/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modeseek {

namespace {

void check_inputs(const Dataset& points, double h, std::span<const double> x) {
    if (points.n == 0) throw std::invalid_argument("density: empty dataset");
    if (!(h > 0.0)) throw std::invalid_argument("density: bandwidth must be positive");
    if (x.size() != points.d) throw std::invalid_argument("density: dimension mismatch");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("density: non-finite query point");
}

} // namespace

double kde(const Dataset& points, const KernelProfile& profile, double h,
           std::span<const double> x) {
    check_inputs(points, h, x);
    const double h2 = h * h;
    double f = 0.0;
    for (std::size_t i = 0; i < points.n; ++i)
        f += eval_k(profile, squared_distance(x, points.point(i)) / h2);
    return f;
}

Vec kde_gradient(const Dataset& points, const KernelProfile& profile, double h,
                 std::span<const double> x) {
    check_inputs(points, h, x);
    const std::size_t d = points.d;
    const double h2 = h * h;
    Vec grad(d, 0.0);
    for (std::size_t i = 0; i < points.n; ++i) {
        const auto xi = points.point(i);
        const double q = std::max(squared_distance(x, xi) / h2, kEpsQ);
        // k'(q) = -g(q); at an exact coincidence the (x - x_i) factor vanishes.
        const double kp = -eval_g(profile, q);
        for (std::size_t j = 0; j < d; ++j) grad[j] += 2.0 * (x[j] - xi[j]) / h2 * kp;
    }
    return grad;
}

DensityEval kde_hessian(const Dataset& points, const KernelProfile& profile, double h,
                        std::span<const double> x) {
    check_inputs(points, h, x);
    const std::size_t d = points.d;
    const double h2 = h * h;

    DensityEval out;
    out.grad.assign(d, 0.0);
    out.A = SymMat(d);

    for (std::size_t i = 0; i < points.n; ++i) {
        const auto xi = points.point(i);
        const double q = std::max(squared_distance(x, xi) / h2, kEpsQ);
        const double g = eval_g(profile, q);
        const double k2 = eval_k2(profile, q);
        out.f += eval_k(profile, q);
        out.C += 2.0 * g;
        for (std::size_t r = 0; r < d; ++r) {
            const double dr = x[r] - xi[r];
            out.grad[r] += 2.0 * dr / h2 * (-g);
            for (std::size_t c = 0; c < d; ++c)
                out.A.at(r, c) += 4.0 * dr * (x[c] - xi[c]) * k2;
        }
    }

    out.hessian = SymMat(d);
    const double h4 = h2 * h2;
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            out.hessian.at(r, c) = (r == c ? -out.C / h2 : 0.0) + out.A.at(r, c) / h4;
    return out;
}

RankDiagnostic hessian_rank_diagnostic(const Dataset& points, const KernelProfile& profile,
                                       double h, std::span<const double> xstar) {
    const DensityEval eval = kde_hessian(points, profile, h, xstar);
    const std::size_t d = points.d;

    RankDiagnostic diag;
    diag.C = eval.C;

    const EigenDecomposition hess_eig = jacobi_eigen(eval.hessian, 1e-10);
    diag.eigenvalues = hess_eig.values;
    diag.min_abs_eigenvalue = std::abs(hess_eig.values[0]);
    for (double v : hess_eig.values)
        diag.min_abs_eigenvalue = std::min(diag.min_abs_eigenvalue, std::abs(v));

    SymMat a_scaled = eval.A;
    for (double& v : a_scaled.a) v /= h * h;
    diag.lambda_max_A_over_h2 = jacobi_eigen(a_scaled, 1e-10).values.front();
    diag.certificate = diag.lambda_max_A_over_h2 < diag.C;

    // Bounding-box containment: cheap necessary condition for lying in the
    // convex hull of the data, where the certificate derivation applies.
    for (std::size_t j = 0; j < d && diag.inside_bbox; ++j) {
        double lo = points.point(0)[j];
        double hi = lo;
        for (std::size_t i = 1; i < points.n; ++i) {
            lo = std::min(lo, points.point(i)[j]);
            hi = std::max(hi, points.point(i)[j]);
        }
        const double slack = 1e-9 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
        if (xstar[j] < lo - slack || xstar[j] > hi + slack) diag.inside_bbox = false;
    }
    return diag;
}

} // namespace modeseek
