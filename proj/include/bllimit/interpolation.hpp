#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bll {

// Natural cubic spline through (x_k, y_k); x strictly increasing.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    const std::vector<double>& knots() const noexcept { return x_; }
    const std::vector<double>& values() const noexcept { return y_; }

private:
    std::size_t segment(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at knots
};

// Fritsch-Carlson monotone piecewise cubic Hermite interpolant.
class Pchip {
public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> d_;
};

// Slopes only; for callers holding their own storage.
void pchip_slopes(std::span<const double> x, std::span<const double> y, std::span<double> d);
double pchip_eval(std::span<const double> x, std::span<const double> y, std::span<const double> d,
                  double t);

}  // namespace bll
