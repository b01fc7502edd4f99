#include "tumorcord/tridiagonal.hpp"

#include <cmath>

#include "tumorcord/errors.hpp"

namespace tumorcord {

std::vector<double> solve_tridiagonal(const TridiagonalSystem& s) {
    const std::size_t n = s.size();
    std::vector<double> c_prime(n, 0.0);
    std::vector<double> x(n, 0.0);
    if (n == 0) return x;

    double pivot = s.diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericalError("tridiagonal: zero pivot at row 0");
    c_prime[0] = s.upper[0] / pivot;
    x[0] = s.rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = s.diag[i] - s.lower[i] * c_prime[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw NumericalError("tridiagonal: zero pivot at row " + std::to_string(i));
        }
        c_prime[i] = (i + 1 < n) ? s.upper[i] / pivot : 0.0;
        x[i] = (s.rhs[i] - s.lower[i] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= c_prime[i] * x[i + 1];
    }
    return x;
}

}  // namespace tumorcord
