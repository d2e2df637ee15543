#include "bllimit/plotting.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "bllimit/error.hpp"

namespace bll {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string label(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

std::filesystem::path profile_points_path(const std::filesystem::path& svg_path) {
    std::filesystem::path p = svg_path;
    p.replace_extension(".points.csv");
    return p;
}

void emit_profile_svg(const VelocityProfile& profile, const std::filesystem::path& path) {
    const std::size_t n = profile.y.size();
    if (n == 0 || profile.u.size() != n)
        throw Error(ErrorKind::ValidationError, "emit_profile_svg: profile is empty or malformed");
    const auto [umin_it, umax_it] = std::minmax_element(profile.u.begin(), profile.u.end());
    const auto [ymin_it, ymax_it] = std::minmax_element(profile.y.begin(), profile.y.end());
    const double umin = *umin_it, ymin = *ymin_it, ymax = *ymax_it;
    double uw = *umax_it - umin, yh = ymax - ymin;
    if (uw == 0.0) uw = 1.0;
    if (yh == 0.0) yh = 1.0;

    std::vector<std::string> us(n), ys(n);
    for (std::size_t k = 0; k < n; ++k) {
        us[k] = num(profile.u[k]);
        ys[k] = num(profile.y[k]);
    }

    constexpr int width = 640, height = 480, left = 80, right = 20, top = 20, bottom = 60;
    constexpr int pw = width - left - right, ph = height - top - bottom;
    std::ofstream svg(path);
    if (!svg) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "  <g stroke=\"black\" stroke-width=\"1\">\n"
        << "    <line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
        << "\"/>\n"
        << "    <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph << "\"/>\n"
        << "  </g>\n"
        << "  <g font-family=\"sans-serif\" font-size=\"12\">\n"
        << "    <text x=\"" << left << "\" y=\"" << top + ph + 18 << "\">" << label(umin) << "</text>\n"
        << "    <text x=\"" << left + pw << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"end\">"
        << label(umin + uw) << "</text>\n"
        << "    <text x=\"" << left - 6 << "\" y=\"" << top + ph << "\" text-anchor=\"end\">" << label(ymin)
        << "</text>\n"
        << "    <text x=\"" << left - 6 << "\" y=\"" << top + 12 << "\" text-anchor=\"end\">" << label(ymin + yh)
        << "</text>\n"
        << "    <text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">u (m/s)</text>\n"
        << "    <text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << top + ph / 2 << ")\">y (m)</text>\n"
        << "  </g>\n"
        << "  <svg x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" viewBox=\"" << num(umin) << ' ' << num(-(ymin + yh)) << ' ' << num(uw) << ' ' << num(yh)
        << "\" preserveAspectRatio=\"none\">\n"
        << "    <g transform=\"scale(1,-1)\">\n"
        << "      <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" vector-effect=\"non-scaling-stroke\" "
           "points=\"";
    for (std::size_t k = 0; k < n; ++k) svg << (k ? " " : "") << us[k] << ',' << ys[k];
    svg << "\"/>\n    </g>\n  </svg>\n</svg>\n";
    if (!svg) throw Error(ErrorKind::IoError, "write failed for " + path.string());

    const std::filesystem::path csv_path = profile_points_path(path);
    std::ofstream csv(csv_path);
    if (!csv) throw Error(ErrorKind::IoError, "cannot write " + csv_path.string());
    csv << "y,u\n";
    for (std::size_t k = 0; k < n; ++k) csv << ys[k] << ',' << us[k] << '\n';
    if (!csv) throw Error(ErrorKind::IoError, "write failed for " + csv_path.string());
}

}  // namespace bll
