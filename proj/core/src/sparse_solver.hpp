#pragma once

#include <memory>
#include <vector>

#include "tumorcord/grid2d.hpp"

namespace tumorcord::detail {

/// Symmetric five-point operator on a Grid2D. east[k] couples node k with
/// k + 1 (same row), north[k] couples k with k + nx. Dirichlet nodes carry
/// an identity row and no couplings.
struct Stencil5 {
    int nx = 0;
    int nz = 0;
    std::vector<double> diag;
    std::vector<double> east;
    std::vector<double> north;

    explicit Stencil5(const Grid2D& grid)
        : nx(grid.nx), nz(grid.nz), diag(grid.size(), 0.0), east(grid.size(), 0.0), north(grid.size(), 0.0) {}

    void apply(const std::vector<double>& x, std::vector<double>& y) const;
};

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Preconditioned conjugate gradients with a sparse Cholesky factor of a
/// fixed reference operator as preconditioner.
class ReferencePcg {
public:
    ReferencePcg();
    ~ReferencePcg();
    ReferencePcg(ReferencePcg&&) noexcept;
    ReferencePcg& operator=(ReferencePcg&&) noexcept;

    /// Factorises the reference operator. Throws NumericalError on failure.
    void factorize(const Stencil5& reference);
    bool ready() const noexcept;

    /// Solves A x = b starting from the given x. Throws NumericalError if
    /// max_iters is exhausted.
    SolveStats solve(const Stencil5& A, const std::vector<double>& b, std::vector<double>& x,
                     double rel_tol = 1e-12, int max_iters = 500) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace tumorcord::detail
