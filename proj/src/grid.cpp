#include "bllimit/grid.hpp"

#include <cmath>
#include <string>

#include "bllimit/error.hpp"

namespace bll {

void Grid2D::build_axes(std::size_t n_s, std::size_t n_t) {
    if (n_s < 3 || n_t < 8)
        throw Error(ErrorKind::GridTooCoarse, "grid needs n_s >= 3 and n_t >= 8 (got " + std::to_string(n_s) +
                                                  " x " + std::to_string(n_t) + ")");
    n_s_ = n_s;
    n_t_ = n_t;
    s_.resize(n_s);
    tau_hat_.resize(n_t);
    for (std::size_t i = 0; i < n_s; ++i) s_[i] = static_cast<double>(i) / static_cast<double>(n_s - 1);
    for (std::size_t j = 0; j < n_t; ++j) tau_hat_[j] = static_cast<double>(j) / static_cast<double>(n_t - 1);
    h_.resize(n_s);
    dh_.resize(n_s);
}

std::shared_ptr<const Grid2D> Grid2D::from_curve(const HeightCurve& curve, std::size_t n_s, std::size_t n_t) {
    auto g = std::shared_ptr<Grid2D>(new Grid2D());
    g->build_axes(n_s, n_t);
    g->curve_ = curve;
    g->length_ = curve.length();
    g->height_ = curve.max_height();
    g->delta_hat_ = curve.delta() / curve.max_height();
    g->crest_s_ = curve.crest() / curve.length();
    for (std::size_t i = 0; i < n_s; ++i) {
        g->h_[i] = g->roof(g->s_[i]);
        g->dh_[i] = g->roof_slope(g->s_[i]);
        if (!(g->h_[i] > 0.0)) throw Error(ErrorKind::NonPhysicalParameter, "h_eps must be > 0");
    }
    // periodic image
    g->h_[n_s - 1] = g->h_[0];
    return g;
}

std::shared_ptr<const Grid2D> Grid2D::flat(double length, double height, std::size_t n_s, std::size_t n_t) {
    if (!(length > 0.0) || !(height > 0.0)) throw Error(ErrorKind::NonPositiveLength, "flat grid: L, H must be > 0");
    auto g = std::shared_ptr<Grid2D>(new Grid2D());
    g->build_axes(n_s, n_t);
    g->length_ = length;
    g->height_ = height;
    g->delta_hat_ = 1.0;
    g->crest_s_ = 0.0;
    for (std::size_t i = 0; i < n_s; ++i) {
        g->h_[i] = 1.0;
        g->dh_[i] = 0.0;
    }
    return g;
}

double Grid2D::roof(double s) const {
    if (!curve_) return 1.0;
    return (*curve_)(s * length_) / height_;
}

double Grid2D::roof_slope(double s) const {
    if (!curve_) return 0.0;
    return curve_->slope(s * length_) * length_ / height_;
}

bool Grid2D::same_layout(const Grid2D& o) const noexcept {
    if (this == &o) return true;
    return n_s_ == o.n_s_ && n_t_ == o.n_t_ && length_ == o.length_ && height_ == o.height_ && h_ == o.h_;
}

Field2D::Field2D(std::shared_ptr<const Grid2D> grid, double fill) : grid_(std::move(grid)) {
    if (!grid_) throw Error(ErrorKind::GridMismatch, "field without grid");
    values_.assign(grid_->size(), fill);
}

bool Field2D::all_finite() const noexcept {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

double Field2D::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void require_same_grid(const Field2D& a, const Field2D& b, const char* what) {
    if (!a.grid().same_layout(b.grid()))
        throw Error(ErrorKind::GridMismatch, std::string(what) + ": fields live on different grids");
}

RescaledDomain rescale_domain(const HeightCurve& curve, std::size_t n_s, std::size_t n_t) {
    RescaledDomain d;
    d.grid = Grid2D::from_curve(curve, n_s, n_t);
    d.scaling.length = curve.length();
    d.scaling.epsilon = curve.epsilon();
    return d;
}

double integrate_field(const Field2D& field) {
    const Grid2D& g = field.grid();
    const std::size_t ns = g.n_s(), nt = g.n_t();
    double total = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
        const double wi = (i == 0 || i + 1 == ns) ? 0.5 : 1.0;
        double col = 0.0;
        for (std::size_t j = 0; j < nt; ++j) {
            const double wj = (j == 0 || j + 1 == nt) ? 0.5 : 1.0;
            col += wj * field(i, j);
        }
        total += wi * g.h(i) * col;
    }
    return total * g.ds() * g.dtau_hat();
}

}  // namespace bll
