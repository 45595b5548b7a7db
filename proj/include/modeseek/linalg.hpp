#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace modeseek {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Dense symmetric matrix, row-major, small dimension (d <= ~10 in practice).
struct SymMat {
    std::size_t d = 0;
    std::vector<double> a;

    SymMat() = default;
    explicit SymMat(std::size_t dim) : d(dim), a(dim * dim, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a[i * d + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * d + j]; }

    static SymMat identity(std::size_t dim);
    double frobenius_norm() const;
    double off_diagonal_norm() const;
};

struct EigenDecomposition {
    Vec values;                     // sorted descending
    std::vector<Vec> vectors;       // vectors[k] pairs with values[k], unit norm
    int sweeps = 0;
};

/// Cyclic Jacobi rotations for a symmetric matrix. Terminates when the
/// off-diagonal Frobenius norm drops below rel_tol * ||A||_F.
EigenDecomposition jacobi_eigen(SymMat m, double rel_tol = 1e-10);

} // namespace modeseek
