#include "monge2/harness/svg.hpp"

#include "monge2/harness/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace monge2::harness {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 90, kRight = 170, kTop = 40, kBottom = 60;
constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Axis {
    double lo = 0, hi = 1;
    bool log = false;

    double map(double v) const { return log ? std::log10(v) : v; }
    double fraction(double v) const { return (map(v) - lo) / (hi - lo); }
};

Axis fit_axis(const std::vector<double>& values, bool log) {
    Axis a;
    a.log = log;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values) {
        const double m = a.map(v);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    if (!(lo <= hi)) lo = 0, hi = 1;
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    a.lo = lo - pad;
    a.hi = hi + pad;
    return a;
}

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

std::string tick_label(double m, bool log) {
    if (log) return fmt::format("1e{}", static_cast<int>(std::lround(m)));
    return fmt::format("{:.3g}", m);
}

} // namespace

std::string render_svg(const Plot& plot) {
    std::vector<double> xs, ys;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            if (usable(s.x[i], plot.log_x) && usable(s.y[i], plot.log_y)) {
                xs.push_back(s.x[i]);
                ys.push_back(s.y[i]);
            }
    const Axis ax = fit_axis(xs, plot.log_x);
    const Axis ay = fit_axis(ys, plot.log_y);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + pw * ax.fraction(v); };
    auto py = [&](double v) { return kTop + ph * (1.0 - ay.fraction(v)); };

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n",
        kWidth, kHeight, kWidth, kHeight);
    out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
    out += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                       kLeft + pw / 2, escape(plot.title));
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n", kLeft,
                       kTop, pw, ph);

    // Five ticks per axis; on log axes they land on whole decades when the span allows.
    auto ticks = [](const Axis& a) {
        std::vector<double> t;
        if (a.log && a.hi - a.lo >= 2.0) {
            const int step = std::max(1, static_cast<int>(std::ceil((a.hi - a.lo) / 6.0)));
            for (int d = static_cast<int>(std::ceil(a.lo)); d <= a.hi; d += step) t.push_back(d);
        } else {
            for (int i = 0; i <= 4; ++i) t.push_back(a.lo + (a.hi - a.lo) * i / 4.0);
        }
        return t;
    };
    for (double m : ticks(ax)) {
        const double x = kLeft + pw * (m - ax.lo) / (ax.hi - ax.lo);
        out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"#ddd\"/>\n", x, kTop,
                           kTop + ph);
        out += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x, kTop + ph + 16,
                           tick_label(m, ax.log && ax.hi - ax.lo >= 2.0));
    }
    for (double m : ticks(ay)) {
        const double y = kTop + ph * (1.0 - (m - ay.lo) / (ay.hi - ay.lo));
        out += fmt::format("<line x1=\"{1}\" y1=\"{0:.2f}\" x2=\"{2}\" y2=\"{0:.2f}\" stroke=\"#ddd\"/>\n", y, kLeft,
                           kLeft + pw);
        out += fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", kLeft - 6, y + 4,
                           tick_label(m, ay.log && ay.hi - ay.lo >= 2.0));
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2, kHeight - 18,
                       escape(plot.x_label) + (plot.log_x ? " (log)" : ""));
    out += fmt::format("<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
                       kTop + ph / 2, escape(plot.y_label) + (plot.log_y ? " (log)" : ""));

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* color = kColors[k % kColors.size()];
        std::string points;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable(s.x[i], plot.log_x) || !usable(s.y[i], plot.log_y)) continue;
            const double x = px(s.x[i]), y = py(s.y[i]);
            points += fmt::format("{:.2f},{:.2f} ", x, y);
            out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\" fill=\"{}\"/>\n", x, y,
                               s.scatter ? 1.6 : 3.0, color);
        }
        if (!s.scatter && !points.empty())
            out += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", points,
                               color);
        const double ly = kTop + 14 + 18.0 * static_cast<double>(k);
        out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", kLeft + pw + 12,
                           ly - 10, color);
        out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kLeft + pw + 30, ly, escape(s.label));
    }
    out += "</svg>\n";
    return out;
}

} // namespace monge2::harness
