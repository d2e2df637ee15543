#include "bllimit/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bll {

namespace {

std::size_t locate(std::span<const double> x, double t) {
    // index k with x[k] <= t < x[k+1], clamped to the end segments
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t k = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    return std::min(k, x.size() - 2);
}

void check_knots(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("interpolation: x and y differ in length");
    if (x.size() < 2) throw std::invalid_argument("interpolation: need at least two knots");
    for (std::size_t k = 1; k < x.size(); ++k)
        if (!(x[k] > x[k - 1])) throw std::invalid_argument("interpolation: knots must be strictly increasing");
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    check_knots(x_, y_);
    const std::size_t n = x_.size();
    m_.assign(n, 0.0);
    if (n < 3) return;
    // tridiagonal system for interior second derivatives, natural ends
    std::vector<double> c(n, 0.0), r(n, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double h0 = x_[k] - x_[k - 1];
        const double h1 = x_[k + 1] - x_[k];
        const double rhs = 6.0 * ((y_[k + 1] - y_[k]) / h1 - (y_[k] - y_[k - 1]) / h0);
        const double diag = 2.0 * (h0 + h1) - h0 * c[k - 1];
        c[k] = h1 / diag;
        r[k] = (rhs - h0 * r[k - 1]) / diag;
    }
    for (std::size_t k = n - 2; k >= 1; --k) {
        m_[k] = r[k] - c[k] * m_[k + 1];
        if (k == 1) break;
    }
}

std::size_t CubicSpline::segment(double x) const { return locate(x_, x); }

double CubicSpline::operator()(double x) const {
    const std::size_t k = segment(x);
    const double h = x_[k + 1] - x_[k];
    const double a = (x_[k + 1] - x) / h;
    const double b = (x - x_[k]) / h;
    return a * y_[k] + b * y_[k + 1] + ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const std::size_t k = segment(x);
    const double h = x_[k + 1] - x_[k];
    const double a = (x_[k + 1] - x) / h;
    const double b = (x - x_[k]) / h;
    return (y_[k + 1] - y_[k]) / h + ((1.0 - 3.0 * a * a) * m_[k] + (3.0 * b * b - 1.0) * m_[k + 1]) * h / 6.0;
}

double CubicSpline::second_derivative(double x) const {
    const std::size_t k = segment(x);
    const double h = x_[k + 1] - x_[k];
    const double b = (x - x_[k]) / h;
    return (1.0 - b) * m_[k] + b * m_[k + 1];
}

void pchip_slopes(std::span<const double> x, std::span<const double> y, std::span<double> d) {
    const std::size_t n = x.size();
    if (n == 2) {
        d[0] = d[1] = (y[1] - y[0]) / (x[1] - x[0]);
        return;
    }
    auto delta = [&](std::size_t k) { return (y[k + 1] - y[k]) / (x[k + 1] - x[k]); };
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double d0 = delta(k - 1);
        const double d1 = delta(k);
        if (d0 * d1 <= 0.0) {
            d[k] = 0.0;
        } else {
            const double h0 = x[k] - x[k - 1];
            const double h1 = x[k + 1] - x[k];
            const double w1 = 2.0 * h1 + h0;
            const double w2 = h1 + 2.0 * h0;
            d[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
        }
    }
    // three-point end formula, shape preserving
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) s = 0.0;
        else if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) s = 3.0 * d0;
        return s;
    };
    d[0] = end_slope(x[1] - x[0], x[2] - x[1], delta(0), delta(1));
    d[n - 1] = end_slope(x[n - 1] - x[n - 2], x[n - 2] - x[n - 3], delta(n - 2), delta(n - 3));
}

double pchip_eval(std::span<const double> x, std::span<const double> y, std::span<const double> d, double t) {
    const std::size_t k = locate(x, t);
    const double h = x[k + 1] - x[k];
    const double s = (t - x[k]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * y[k] + h10 * h * d[k] + h01 * y[k + 1] + h11 * h * d[k + 1];
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    check_knots(x_, y_);
    d_.assign(x_.size(), 0.0);
    pchip_slopes(x_, y_, d_);
}

double Pchip::operator()(double x) const { return pchip_eval(x_, y_, d_, x); }

}  // namespace bll
