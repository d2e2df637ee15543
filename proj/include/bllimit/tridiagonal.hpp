#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bll {

// Thomas factorisation of a tridiagonal matrix, reusable for many right-hand sides.
// lower[0] and upper[n-1] are ignored.
class TridiagonalFactor {
public:
    TridiagonalFactor() = default;
    TridiagonalFactor(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper);

    void factor(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper);
    void solve_in_place(std::span<double> rhs) const;
    std::size_t size() const noexcept { return inv_.size(); }

private:
    std::vector<double> lower_;
    std::vector<double> cprime_;
    std::vector<double> inv_;  // 1 / pivot
};

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

}  // namespace bll
