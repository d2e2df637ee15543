#include "bllimit/tridiagonal.hpp"

#include <cmath>

#include "bllimit/error.hpp"

namespace bll {

TridiagonalFactor::TridiagonalFactor(std::span<const double> lower, std::span<const double> diag,
                                     std::span<const double> upper) {
    factor(lower, diag, upper);
}

void TridiagonalFactor::factor(std::span<const double> lower, std::span<const double> diag,
                               std::span<const double> upper) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n)
        throw Error(ErrorKind::GridMismatch, "tridiagonal: band lengths differ");
    lower_.assign(lower.begin(), lower.end());
    cprime_.assign(n, 0.0);
    inv_.assign(n, 0.0);
    double c_prev = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double pivot = diag[j] - (j > 0 ? lower[j] * c_prev : 0.0);
        if (pivot == 0.0 || !std::isfinite(pivot))
            throw Error(ErrorKind::SolveFailure, "tridiagonal: zero pivot at row " + std::to_string(j));
        inv_[j] = 1.0 / pivot;
        c_prev = (j + 1 < n) ? upper[j] * inv_[j] : 0.0;
        cprime_[j] = c_prev;
    }
}

void TridiagonalFactor::solve_in_place(std::span<double> rhs) const {
    const std::size_t n = inv_.size();
    rhs[0] *= inv_[0];
    for (std::size_t j = 1; j < n; ++j) rhs[j] = (rhs[j] - lower_[j] * rhs[j - 1]) * inv_[j];
    for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= cprime_[j] * rhs[j + 1];
}

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
    TridiagonalFactor f(lower, diag, upper);
    std::vector<double> x(rhs.begin(), rhs.end());
    f.solve_in_place(x);
    return x;
}

}  // namespace bll
