#include "oracles.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

namespace oracle {

double mp_pow(double sigma, double a) {
    using boost::multiprecision::cpp_bin_float_50;
    return static_cast<double>(boost::multiprecision::pow(cpp_bin_float_50(sigma), cpp_bin_float_50(a)));
}

double midpoint_g(double u, double i0, double exponent, std::size_t panels) {
    const double w = u / static_cast<double>(panels);
    double sum = 0.0, comp = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        const double s = (static_cast<double>(k) + 0.5) * w;
        const double term = std::pow(1.0 - s * s / (2.0 * i0), exponent) - comp;
        const double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    return sum * w;
}

namespace {

double rhs(double u, double i0, double exponent) { return std::pow(1.0 - u * u / (2.0 * i0), -exponent); }

double integrate(double K, double h, double i0, double exponent, std::size_t steps, std::size_t every,
                 std::vector<double>* ys, std::vector<double>* us) {
    const double dy = h / static_cast<double>(steps);
    double u = 0.0;
    if (us) {
        ys->assign(1, 0.0);
        us->assign(1, 0.0);
    }
    for (std::size_t n = 0; n < steps; ++n) {
        const double k1 = K * rhs(u, i0, exponent);
        const double k2 = K * rhs(u + 0.5 * dy * k1, i0, exponent);
        const double k3 = K * rhs(u + 0.5 * dy * k2, i0, exponent);
        const double k4 = K * rhs(u + dy * k3, i0, exponent);
        u += dy / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (us && (n + 1) % every == 0) {
            ys->push_back(h * static_cast<double>(n + 1) / static_cast<double>(steps));
            us->push_back(u);
        }
    }
    return u;
}

}  // namespace

Shooting rk4_shoot(double h, double U, double i0, double exponent, std::size_t steps, std::size_t sample_every) {
    // f in [1, f(U)] so K lies in [-U/h, -U/(h f(U))]
    double a = -U / h, b = -U / (h * rhs(U, i0, exponent));
    double fa = integrate(a, h, i0, exponent, steps, sample_every, nullptr, nullptr) + U;
    double fb = integrate(b, h, i0, exponent, steps, sample_every, nullptr, nullptr) + U;
    if (fa * fb > 0.0) throw bll::Error(bll::ErrorKind::BracketFailure, "rk4_shoot: bracket");
    int side = 0;
    double c = a;
    // Illinois regula falsi
    for (int it = 0; it < 200; ++it) {
        c = (a * fb - b * fa) / (fb - fa);
        const double fc = integrate(c, h, i0, exponent, steps, sample_every, nullptr, nullptr) + U;
        if (std::abs(fc) <= 1e-15 * U || std::abs(b - a) <= 1e-16 * std::abs(c)) break;
        if (fc * fb > 0.0) {
            b = c;
            fb = fc;
            if (side == -1) fa *= 0.5;
            side = -1;
        } else {
            a = c;
            fa = fc;
            if (side == 1) fb *= 0.5;
            side = 1;
        }
    }
    Shooting out;
    out.K = c;
    integrate(c, h, i0, exponent, steps, sample_every, &out.y, &out.u);
    return out;
}

bll::GasParameters half_alpha_gas() {
    bll::GasParameters g;
    g.U = std::sqrt(2.0 * g.c_p * g.T_h);
    return g;
}

std::optional<bll::ErrorKind> kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const bll::Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

}  // namespace oracle
