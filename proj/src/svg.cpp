#include "rpet/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string_view>

namespace rpet {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 160, kTop = 40, kBottom = 60;
constexpr std::array<const char*, 8> kColors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Smallest 1-2-5 step giving at most `max_ticks` intervals over [0, hi].
double nice_step(double hi, int max_ticks) {
    if (!(hi > 0.0)) return 1.0;
    const double raw = hi / max_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) return m * mag;
    return 10.0 * mag;
}

std::string tick_label(double v, double step) {
    const int decimals = std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9)));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

std::string render_svg(const Plot& plot) {
    double x_hi = 0.0, y_hi = 0.0;
    for (const auto& s : plot.series) {
        for (double v : s.x) x_hi = std::max(x_hi, v);
        for (double v : s.y) y_hi = std::max(y_hi, v);
    }
    const double xs = nice_step(x_hi, 8), ys = nice_step(y_hi, 8);
    const double x_max = std::max(xs, std::ceil(x_hi / xs - 1e-9) * xs);
    const double y_max = std::max(ys, std::ceil(y_hi / ys - 1e-9) * ys);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + pw * x / x_max; };
    auto py = [&](double y) { return kTop + ph * (1.0 - y / y_max); };

    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" viewBox=\"0 0 640 420\" "
         "font-family=\"sans-serif\" font-size=\"12\">\n";
    o += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"420\" fill=\"white\"/>\n";
    if (!plot.title.empty())
        o += "<text x=\"" + fmt("%.1f", kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
             escape(plot.title) + "</text>\n";

    for (int i = 0; i * xs <= x_max + 1e-12 * x_max; ++i) {
        const double v = i * xs, x = px(v);
        o += "<line x1=\"" + fmt("%.2f", x) + "\" y1=\"" + fmt("%.2f", kTop) + "\" x2=\"" + fmt("%.2f", x) +
             "\" y2=\"" + fmt("%.2f", kTop + ph) + "\" stroke=\"#dddddd\"/>\n";
        o += "<text x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", kTop + ph + 16) +
             "\" text-anchor=\"middle\">" + tick_label(v, xs) + "</text>\n";
    }
    for (int i = 0; i * ys <= y_max + 1e-12 * y_max; ++i) {
        const double v = i * ys, y = py(v);
        o += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", y) + "\" x2=\"" + fmt("%.2f", kLeft + pw) +
             "\" y2=\"" + fmt("%.2f", y) + "\" stroke=\"#dddddd\"/>\n";
        o += "<text x=\"" + fmt("%.2f", kLeft - 6) + "\" y=\"" + fmt("%.2f", y + 4) + "\" text-anchor=\"end\">" +
             tick_label(v, ys) + "</text>\n";
    }
    o += "<rect x=\"" + fmt("%.2f", kLeft) + "\" y=\"" + fmt("%.2f", kTop) + "\" width=\"" + fmt("%.2f", pw) +
         "\" height=\"" + fmt("%.2f", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fmt("%.1f", kLeft + pw / 2) + "\" y=\"" + fmt("%.1f", kHeight - 18) +
         "\" text-anchor=\"middle\">" + escape(plot.x_label) + "</text>\n";
    o += "<text x=\"18\" y=\"" + fmt("%.1f", kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fmt("%.1f", kTop + ph / 2) + ")\">" + escape(plot.y_label) + "</text>\n";

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* color = kColors[k % kColors.size()];
        o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (i) o += ' ';
            o += fmt("%.2f", px(s.x[i])) + "," + fmt("%.2f", py(s.y[i]));
        }
        o += "\"/>\n";
        const double ly = kTop + 10 + 18 * static_cast<double>(k);
        const double lx = kLeft + pw + 12;
        o += "<line x1=\"" + fmt("%.1f", lx) + "\" y1=\"" + fmt("%.1f", ly) + "\" x2=\"" + fmt("%.1f", lx + 20) +
             "\" y2=\"" + fmt("%.1f", ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        o += "<text x=\"" + fmt("%.1f", lx + 26) + "\" y=\"" + fmt("%.1f", ly + 4) + "\">" + escape(s.label) +
             "</text>\n";
    }
    o += "</svg>\n";
    return o;
}

}  // namespace rpet
