#include "sparse_solver.hpp"

#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "tumorcord/errors.hpp"

namespace tumorcord::detail {

void Stencil5::apply(const std::vector<double>& x, std::vector<double>& y) const {
    const std::size_t n = diag.size();
    const auto sx = static_cast<std::size_t>(nx);
    y.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = diag[k] * x[k];
        const std::size_t i = k % sx;
        if (i + 1 < sx) acc += east[k] * x[k + 1];
        if (i > 0) acc += east[k - 1] * x[k - 1];
        if (k + sx < n) acc += north[k] * x[k + sx];
        if (k >= sx) acc += north[k - sx] * x[k - sx];
        y[k] = acc;
    }
}

struct ReferencePcg::Impl {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor;
    bool ready = false;
};

ReferencePcg::ReferencePcg() : impl_(std::make_unique<Impl>()) {}
ReferencePcg::~ReferencePcg() = default;
ReferencePcg::ReferencePcg(ReferencePcg&&) noexcept = default;
ReferencePcg& ReferencePcg::operator=(ReferencePcg&&) noexcept = default;

bool ReferencePcg::ready() const noexcept { return impl_->ready; }

void ReferencePcg::factorize(const Stencil5& ref) {
    const auto n = static_cast<Eigen::Index>(ref.diag.size());
    const auto sx = static_cast<std::size_t>(ref.nx);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(ref.diag.size() * 5);
    for (std::size_t k = 0; k < ref.diag.size(); ++k) {
        const auto r = static_cast<Eigen::Index>(k);
        triplets.emplace_back(r, r, ref.diag[k]);
        if (k % sx + 1 < sx && ref.east[k] != 0.0) {
            triplets.emplace_back(r, r + 1, ref.east[k]);
            triplets.emplace_back(r + 1, r, ref.east[k]);
        }
        if (k + sx < ref.diag.size() && ref.north[k] != 0.0) {
            const auto q = static_cast<Eigen::Index>(k + sx);
            triplets.emplace_back(r, q, ref.north[k]);
            triplets.emplace_back(q, r, ref.north[k]);
        }
    }
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    impl_->factor.compute(m);
    if (impl_->factor.info() != Eigen::Success) {
        impl_->ready = false;
        throw NumericalError("sparse Cholesky factorisation failed");
    }
    impl_->ready = true;
}

SolveStats ReferencePcg::solve(const Stencil5& A, const std::vector<double>& b, std::vector<double>& x,
                               double rel_tol, int max_iters) const {
    if (!impl_->ready) throw NumericalError("ReferencePcg::solve called before factorize");
    const std::size_t n = b.size();
    std::vector<double> r(n);
    std::vector<double> Ap(n);
    A.apply(x, Ap);
    double bnorm = 0.0;
    double rnorm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        r[k] = b[k] - Ap[k];
        bnorm += b[k] * b[k];
        rnorm += r[k] * r[k];
    }
    bnorm = std::sqrt(bnorm);
    if (bnorm == 0.0) bnorm = 1.0;
    SolveStats stats;
    stats.relative_residual = std::sqrt(rnorm) / bnorm;
    if (stats.relative_residual <= rel_tol) return stats;

    Eigen::Map<Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(n));
    Eigen::VectorXd z = impl_->factor.solve(rv);
    Eigen::VectorXd p = z;
    double rz = rv.dot(z);
    std::vector<double> pv(n);
    for (int it = 1; it <= max_iters; ++it) {
        for (std::size_t k = 0; k < n; ++k) pv[k] = p[static_cast<Eigen::Index>(k)];
        A.apply(pv, Ap);
        double pAp = 0.0;
        for (std::size_t k = 0; k < n; ++k) pAp += pv[k] * Ap[k];
        if (!(pAp > 0.0)) throw NumericalError("PCG: operator is not positive definite");
        const double step = rz / pAp;
        rnorm = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += step * pv[k];
            r[k] -= step * Ap[k];
            rnorm += r[k] * r[k];
        }
        stats.iterations = it;
        stats.relative_residual = std::sqrt(rnorm) / bnorm;
        if (stats.relative_residual <= rel_tol) return stats;
        z = impl_->factor.solve(rv);
        const double rz_next = rv.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    throw NumericalError("PCG: no convergence within " + std::to_string(max_iters) + " iterations");
}

}  // namespace tumorcord::detail
