#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bllimit/core_types.hpp"

namespace bll {

// Mapped grid over the rescaled domain: stations s_i in [0, 1], tau_hat = tau / h_eps(s) in [0, 1].
// Station n_s - 1 (s = 1) is the periodic image of station 0.
class Grid2D {
public:
    static std::shared_ptr<const Grid2D> from_curve(const HeightCurve& curve, std::size_t n_s, std::size_t n_t);
    // flat roof of physical height H over [0, L]; h_eps = 1
    static std::shared_ptr<const Grid2D> flat(double length, double height, std::size_t n_s, std::size_t n_t);

    std::size_t n_s() const noexcept { return n_s_; }
    std::size_t n_t() const noexcept { return n_t_; }
    std::size_t size() const noexcept { return n_s_ * n_t_; }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * n_t_ + j; }

    double ds() const noexcept { return 1.0 / static_cast<double>(n_s_ - 1); }
    double dtau_hat() const noexcept { return 1.0 / static_cast<double>(n_t_ - 1); }
    double s(std::size_t i) const noexcept { return s_[i]; }
    double tau_hat(std::size_t j) const noexcept { return tau_hat_[j]; }
    double h(std::size_t i) const noexcept { return h_[i]; }          // h_eps at station i
    double h_slope(std::size_t i) const noexcept { return dh_[i]; }   // d h_eps / ds
    double tau(std::size_t i, std::size_t j) const noexcept { return tau_hat_[j] * h_[i]; }

    // continuous rescaled roof
    double roof(double s) const;
    double roof_slope(double s) const;

    double length() const noexcept { return length_; }    // L
    double height() const noexcept { return height_; }    // H
    double epsilon() const noexcept { return height_ / length_; }
    double delta_hat() const noexcept { return delta_hat_; }  // h_eps(0)
    double crest_s() const noexcept { return crest_s_; }
    const std::optional<HeightCurve>& curve() const noexcept { return curve_; }

    const std::vector<double>& s_nodes() const noexcept { return s_; }
    const std::vector<double>& tau_hat_nodes() const noexcept { return tau_hat_; }

    bool same_layout(const Grid2D& other) const noexcept;

private:
    Grid2D() = default;
    void build_axes(std::size_t n_s, std::size_t n_t);

    std::size_t n_s_ = 0, n_t_ = 0;
    std::vector<double> s_, tau_hat_, h_, dh_;
    double length_ = 0.0, height_ = 0.0, delta_hat_ = 1.0, crest_s_ = 0.5;
    std::optional<HeightCurve> curve_;
};

class Field2D {
public:
    explicit Field2D(std::shared_ptr<const Grid2D> grid, double fill = 0.0);

    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[grid_->index(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[grid_->index(i, j)]; }

    const Grid2D& grid() const noexcept { return *grid_; }
    const std::shared_ptr<const Grid2D>& grid_ptr() const noexcept { return grid_; }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> column(std::size_t i) const noexcept {
        return std::span<const double>(values_).subspan(grid_->index(i, 0), grid_->n_t());
    }
    std::span<double> column(std::size_t i) noexcept {
        return std::span<double>(values_).subspan(grid_->index(i, 0), grid_->n_t());
    }

    bool all_finite() const noexcept;
    double max_abs() const noexcept;

private:
    std::shared_ptr<const Grid2D> grid_;
    std::vector<double> values_;
};

void require_same_grid(const Field2D& a, const Field2D& b, const char* what);

// phi_eps: (x, y) -> (s, tau) = (x / L, y / (L eps)), with the matching velocity scalings
struct DomainScaling {
    double length = 1.0;
    double epsilon = 1.0;

    double to_s(double x) const noexcept { return x / length; }
    double to_tau(double y) const noexcept { return y / (length * epsilon); }
    double to_x(double s) const noexcept { return s * length; }
    double to_y(double tau) const noexcept { return tau * length * epsilon; }
    double scale_u(double u) const noexcept { return u / length; }
    double scale_v(double v) const noexcept { return v / (length * epsilon); }
    double unscale_u(double u_eps) const noexcept { return u_eps * length; }
    double unscale_v(double v_eps) const noexcept { return v_eps * length * epsilon; }
    // ||u||^2 over Omega_h = factor * ||u_eps||^2 over Omega_eps
    double l2_sq_factor() const noexcept { return length * length * length * length * epsilon; }
};

struct RescaledDomain {
    std::shared_ptr<const Grid2D> grid;
    DomainScaling scaling;
};

RescaledDomain rescale_domain(const HeightCurve& curve, std::size_t n_s, std::size_t n_t);

// composite trapezoid integral of a field over the rescaled domain (area element h_eps ds dtau_hat)
double integrate_field(const Field2D& field);

}  // namespace bll
