#include "swiftnav/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace swiftnav {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string num6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Linear map value -> pixel; pixel_lo corresponds to value_lo.
struct Axis {
    double value_lo = 0.0, value_hi = 1.0;
    double pixel_lo = 0.0, pixel_hi = 1.0;

    double map(double v) const {
        if (value_hi == value_lo) return 0.5 * (pixel_lo + pixel_hi);
        return pixel_lo + (pixel_hi - pixel_lo) * (v - value_lo) / (value_hi - value_lo);
    }
};

void expand(double& lo, double& hi, double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
}

void pad_range(double& lo, double& hi) {
    if (lo > hi) {  // nothing finite seen
        lo = 0.0;
        hi = 1.0;
    }
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
}

std::string polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::string& id, const std::string& color, double width,
                     double opacity = 1.0) {
    std::ostringstream out;
    out << "<polyline id=\"" << id << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"" << width << "\" stroke-opacity=\"" << opacity
        << "\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
        if (i) out << ' ';
        out << num(xs[i]) << ',' << num(ys[i]);
    }
    out << "\"/>\n";
    return out.str();
}

std::string curves_fragment(const std::vector<EpisodeRow>& rows) {
    const double left = 70.0, right = 890.0, top = 40.0, bottom = 480.0;
    const std::size_t n = rows.size();

    std::vector<double> returns(n), steps(n);
    for (std::size_t i = 0; i < n; ++i) {
        returns[i] = rows[i].episode_return;
        steps[i] = static_cast<double>(rows[i].steps);
    }
    const auto ma_r = moving_average(returns, 15);
    const auto ma_s = moving_average(steps, 15);

    double rlo = std::numeric_limits<double>::infinity(), rhi = -rlo;
    double slo = rlo, shi = -rlo;
    for (std::size_t i = 0; i < n; ++i) {
        expand(rlo, rhi, returns[i]);
        expand(rlo, rhi, ma_r[i]);
        expand(slo, shi, steps[i]);
        expand(slo, shi, ma_s[i]);
    }
    pad_range(rlo, rhi);
    pad_range(slo, shi);

    const Axis xaxis{0.0, n > 1 ? double(n - 1) : 1.0, left, right};
    const Axis raxis{rlo, rhi, bottom, top};
    const Axis saxis{slo, shi, bottom, top};

    std::ostringstream out;
    out << "<desc>episode e maps to x = " << num6(left) << " + (" << num6(right) << " - "
        << num6(left) << ") * e / " << num6(xaxis.value_hi) << "; return v maps to y = "
        << num6(bottom) << " + (" << num6(top) << " - " << num6(bottom) << ") * (v - "
        << num(rlo) << ") / (" << num(rhi) << " - " << num(rlo) << "); steps v likewise with ["
        << num(slo) << ", " << num(shi) << "]</desc>\n";
    out << "<rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"#ffffff\"/>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left
        << "\" height=\"" << bottom - top
        << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

    // Gridlines and tick labels (5 ticks per axis).
    for (int k = 0; k <= 4; ++k) {
        const double fx = k / 4.0;
        const double x = left + fx * (right - left);
        const double ep = xaxis.value_lo + fx * (xaxis.value_hi - xaxis.value_lo);
        out << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\""
            << bottom << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << bottom + 18.0
            << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333333\">"
            << num6(std::round(ep)) << "</text>\n";
        const double y = bottom - fx * (bottom - top);
        const double rv = rlo + fx * (rhi - rlo);
        const double sv = slo + fx * (shi - slo);
        out << "<text x=\"" << left - 8.0 << "\" y=\"" << y + 4.0
            << "\" font-size=\"12\" text-anchor=\"end\" fill=\"#1f77b4\">" << num6(rv)
            << "</text>\n";
        out << "<text x=\"" << right + 8.0 << "\" y=\"" << y + 4.0
            << "\" font-size=\"12\" text-anchor=\"start\" fill=\"#d62728\">" << num6(sv)
            << "</text>\n";
    }
    out << "<text x=\"" << 0.5 * (left + right) << "\" y=\"" << bottom + 36.0
        << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#333333\">episode</text>\n";
    out << "<text x=\"18\" y=\"" << 0.5 * (top + bottom)
        << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#1f77b4\" transform=\"rotate(-90 "
           "18 "
        << 0.5 * (top + bottom) << ")\">return (15-episode mean)</text>\n";
    out << "<text x=\"942\" y=\"" << 0.5 * (top + bottom)
        << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#d62728\" transform=\"rotate(90 "
           "942 "
        << 0.5 * (top + bottom) << ")\">steps (15-episode mean)</text>\n";

    // Raw per-episode scatter, faint.
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = xaxis.map(double(i));
    std::ostringstream raw;
    raw << "<g id=\"raw-return\" fill=\"#1f77b4\" fill-opacity=\"0.25\">\n";
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(returns[i])) continue;
        raw << "<circle cx=\"" << num6(xs[i]) << "\" cy=\"" << num6(raxis.map(returns[i]))
            << "\" r=\"1.6\"/>\n";
    }
    raw << "</g>\n";
    out << raw.str();

    std::vector<double> yr(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        yr[i] = raxis.map(ma_r[i]);
        ys[i] = saxis.map(ma_s[i]);
    }
    out << polyline(xs, ys, "ma-steps", "#d62728", 1.8);
    out << polyline(xs, yr, "ma-return", "#1f77b4", 2.2);
    if (n == 1) {
        out << "<circle cx=\"" << num(xs[0]) << "\" cy=\"" << num(yr[0])
            << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
        out << "<circle cx=\"" << num(xs[0]) << "\" cy=\"" << num(ys[0])
            << "\" r=\"3\" fill=\"#d62728\"/>\n";
    }

    // Legend.
    out << "<rect x=\"80\" y=\"14\" width=\"14\" height=\"4\" fill=\"#1f77b4\"/>"
        << "<text x=\"100\" y=\"21\" font-size=\"12\" fill=\"#333333\">return</text>"
        << "<rect x=\"170\" y=\"14\" width=\"14\" height=\"4\" fill=\"#d62728\"/>"
        << "<text x=\"190\" y=\"21\" font-size=\"12\" fill=\"#333333\">steps</text>\n";
    return out.str();
}

const char* mode_color(Mode m) {
    switch (m) {
        case Mode::Travel: return "#1f77b4";
        case Mode::RL: return "#ff7f0e";
        case Mode::Landing: return "#2ca02c";
    }
    return "#000000";
}

std::string map_fragment(const World& world,
                         const std::vector<std::vector<TrajectoryPoint>>& paths) {
    const double left = 60.0, right = 900.0, top = 30.0, bottom = 510.0;
    // Uniform scale fitting the world bounds, centered in the viewport.
    const double w = std::max(world.bounds.width(), 1e-9);
    const double h = std::max(world.bounds.height(), 1e-9);
    const double scale = std::min((right - left) / w, (bottom - top) / h);
    const double cx = 0.5 * (left + right) - 0.5 * w * scale;
    const double cy = 0.5 * (top + bottom) - 0.5 * h * scale;
    const auto X = [&](double wx) { return cx + (wx - world.bounds.xmin) * scale; };
    // World y grows upward; SVG y grows downward.
    const auto Y = [&](double wy) { return cy + (world.bounds.ymax - wy) * scale; };

    std::ostringstream out;
    out << "<rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"#ffffff\"/>\n";
    out << "<rect x=\"" << num6(X(world.bounds.xmin)) << "\" y=\"" << num6(Y(world.bounds.ymax))
        << "\" width=\"" << num6(w * scale) << "\" height=\"" << num6(h * scale)
        << "\" fill=\"#fafafa\" stroke=\"#444444\" stroke-width=\"1.5\"/>\n";

    out << "<g id=\"obstacles\" fill=\"#9e9e9e\" fill-opacity=\"0.8\">\n";
    for (const auto& ob : world.obstacles) {
        out << "<circle cx=\"" << num6(X(ob.center.x)) << "\" cy=\"" << num6(Y(ob.center.y))
            << "\" r=\"" << num6(ob.radius * scale) << "\"/>\n";
    }
    out << "</g>\n";

    // Goal disc (2 m) and start marker.
    out << "<circle id=\"goal\" cx=\"" << num6(X(world.goal.x)) << "\" cy=\""
        << num6(Y(world.goal.y)) << "\" r=\"" << num6(2.0 * scale)
        << "\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"4 3\"/>\n";
    out << "<circle cx=\"" << num6(X(world.goal.x)) << "\" cy=\"" << num6(Y(world.goal.y))
        << "\" r=\"3.5\" fill=\"#2ca02c\"/>\n";
    out << "<circle id=\"start\" cx=\"" << num6(X(world.start.x)) << "\" cy=\""
        << num6(Y(world.start.y)) << "\" r=\"4\" fill=\"#1f77b4\"/>\n";

    // Trajectories: one polyline per run of a single mode so each segment
    // carries its mode's color.
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const auto& path = paths[p];
        std::size_t i = 0;
        std::size_t seg = 0;
        while (i + 1 < path.size()) {
            std::size_t j = i + 1;
            const Mode m = path[j].mode;  // the mode that produced point j
            while (j + 1 < path.size() && path[j + 1].mode == m) ++j;
            std::ostringstream pts;
            for (std::size_t k = i; k <= j; ++k) {
                if (k > i) pts << ' ';
                pts << num6(X(path[k].position.x)) << ',' << num6(Y(path[k].position.y));
            }
            out << "<polyline class=\"traj\" id=\"traj-" << p << "-" << seg++
                << "\" fill=\"none\" stroke=\"" << mode_color(m)
                << "\" stroke-width=\"1.8\" stroke-opacity=\"0.9\" points=\"" << pts.str()
                << "\"/>\n";
            i = j;
        }
    }

    // Legend.
    out << "<g font-size=\"12\" fill=\"#333333\">"
        << "<rect x=\"70\" y=\"518\" width=\"14\" height=\"4\" fill=\"#1f77b4\"/>"
        << "<text x=\"90\" y=\"525\">Travel</text>"
        << "<rect x=\"150\" y=\"518\" width=\"14\" height=\"4\" fill=\"#ff7f0e\"/>"
        << "<text x=\"170\" y=\"525\">RL</text>"
        << "<rect x=\"210\" y=\"518\" width=\"14\" height=\"4\" fill=\"#2ca02c\"/>"
        << "<text x=\"230\" y=\"525\">Landing</text>"
        << "</g>\n";
    return out.str();
}

std::string wrap(double width, double height, const std::string& body) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << body << "</svg>\n";
    return out.str();
}

}  // namespace

std::string svg_learning_curves(const std::vector<EpisodeRow>& rows) {
    return wrap(kWidth, kHeight, curves_fragment(rows));
}

std::string svg_trajectory_map(const World& world,
                               const std::vector<std::vector<TrajectoryPoint>>& paths) {
    return wrap(kWidth, kHeight, map_fragment(world, paths));
}

std::string svg_combined(const std::vector<EpisodeRow>& rows, const World& world,
                         const std::vector<std::vector<TrajectoryPoint>>& paths) {
    std::ostringstream body;
    body << "<g id=\"curves\">\n" << curves_fragment(rows) << "</g>\n";
    body << "<g id=\"map\" transform=\"translate(0 " << kHeight << ")\">\n"
         << map_fragment(world, paths) << "</g>\n";
    return wrap(kWidth, 2.0 * kHeight, body.str());
}

}  // namespace swiftnav
