#include "modeseek/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace modeseek {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

SymMat SymMat::identity(std::size_t dim) {
    SymMat m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

double SymMat::frobenius_norm() const {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

double SymMat::off_diagonal_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (i != j) s += at(i, j) * at(i, j);
    return std::sqrt(s);
}

EigenDecomposition jacobi_eigen(SymMat m, double rel_tol) {
    const std::size_t d = m.d;
    if (d == 0) throw std::invalid_argument("jacobi_eigen: empty matrix");

    std::vector<Vec> v(d, Vec(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) v[i][i] = 1.0;

    const double scale = m.frobenius_norm();
    const double stop = rel_tol * (scale > 0.0 ? scale : 1.0);

    int sweeps = 0;
    const int max_sweeps = 64;
    while (m.off_diagonal_norm() > stop && sweeps < max_sweeps) {
        ++sweeps;
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = m.at(p, q);
                if (apq == 0.0) continue;
                const double app = m.at(p, p);
                const double aqq = m.at(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                // smaller-magnitude root of t^2 + 2 t theta - 1 = 0
                double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = m.at(k, p);
                    const double akq = m.at(k, q);
                    m.at(k, p) = c * akp - s * akq;
                    m.at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = m.at(p, k);
                    const double aqk = m.at(q, k);
                    m.at(p, k) = c * apk - s * aqk;
                    m.at(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = v[k][p];
                    const double vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    EigenDecomposition out;
    out.sweeps = sweeps;
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Vec diag(d);
    for (std::size_t i = 0; i < d; ++i) diag[i] = m.at(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return diag[i] > diag[j]; });

    out.values.resize(d);
    out.vectors.assign(d, Vec(d));
    for (std::size_t k = 0; k < d; ++k) {
        out.values[k] = diag[order[k]];
        for (std::size_t i = 0; i < d; ++i) out.vectors[k][i] = v[i][order[k]];
    }
    return out;
}

} // namespace modeseek
