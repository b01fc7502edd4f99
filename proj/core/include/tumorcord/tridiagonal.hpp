#pragma once

#include <span>
#include <vector>

namespace tumorcord {

/// Tridiagonal system: lower[i] a_{i,i-1}, diag[i] a_{i,i}, upper[i] a_{i,i+1}.
/// lower[0] and upper[n-1] are ignored.
struct TridiagonalSystem {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> rhs;

    explicit TridiagonalSystem(std::size_t n)
        : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0) {}

    std::size_t size() const noexcept { return diag.size(); }
};

/// Thomas algorithm without pivoting. Throws NumericalError on a zero pivot.
std::vector<double> solve_tridiagonal(const TridiagonalSystem& system);

}  // namespace tumorcord
