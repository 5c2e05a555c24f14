#include "mwh/plot.hpp"

#include "mwh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace mwh {
namespace plot {

namespace {

constexpr double kWidth = 720.0;
constexpr double kPanelHeight = 260.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 28.0;
constexpr double kMarginBottom = 40.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Extent {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            const double d = 0.05 * (hi - lo);
            lo -= d;
            hi += d;
        }
    }
};

void render_panel(std::ostringstream& svg, const std::vector<Curve>& curves, double y_origin,
                  const std::string& title, double MetricsRecord::* field) {
    Extent xs, ys;
    for (const auto& c : curves)
        for (const auto& r : c.history) {
            xs.include(static_cast<double>(r.epoch));
            ys.include(r.*field);
        }
    xs.pad();
    ys.pad();

    const double px0 = kMarginLeft, px1 = kWidth - kMarginRight;
    const double py0 = y_origin + kPanelHeight - kMarginBottom, py1 = y_origin + kMarginTop;
    auto sx = [&](double x) { return px0 + (x - xs.lo) / (xs.hi - xs.lo) * (px1 - px0); };
    auto sy = [&](double y) { return py0 + (y - ys.lo) / (ys.hi - ys.lo) * (py1 - py0); };

    svg << "<rect x='" << fmt(px0) << "' y='" << fmt(py1) << "' width='" << fmt(px1 - px0)
        << "' height='" << fmt(py0 - py1)
        << "' fill='none' stroke='#333' stroke-width='1'/>\n";
    svg << "<text x='" << fmt(px0) << "' y='" << fmt(py1 - 8)
        << "' font-family='sans-serif' font-size='13' fill='#111'>" << title << "</text>\n";

    // 5 ticks per axis
    for (int t = 0; t <= 4; ++t) {
        const double xv = xs.lo + (xs.hi - xs.lo) * t / 4.0;
        const double yv = ys.lo + (ys.hi - ys.lo) * t / 4.0;
        svg << "<line x1='" << fmt(sx(xv)) << "' y1='" << fmt(py0) << "' x2='" << fmt(sx(xv))
            << "' y2='" << fmt(py0 + 4) << "' stroke='#333'/>\n";
        svg << "<text x='" << fmt(sx(xv)) << "' y='" << fmt(py0 + 16)
            << "' font-family='sans-serif' font-size='10' text-anchor='middle'>" << fmt(xv)
            << "</text>\n";
        svg << "<line x1='" << fmt(px0 - 4) << "' y1='" << fmt(sy(yv)) << "' x2='" << fmt(px0)
            << "' y2='" << fmt(sy(yv)) << "' stroke='#333'/>\n";
        svg << "<text x='" << fmt(px0 - 6) << "' y='" << fmt(sy(yv) + 3)
            << "' font-family='sans-serif' font-size='10' text-anchor='end'>" << fmt(yv)
            << "</text>\n";
    }
    svg << "<text x='" << fmt((px0 + px1) / 2) << "' y='" << fmt(py0 + 30)
        << "' font-family='sans-serif' font-size='11' text-anchor='middle'>epoch</text>\n";

    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const char* color = kPalette[ci % (sizeof kPalette / sizeof *kPalette)];
        svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (const auto& r : curves[ci].history)
            svg << fmt(sx(static_cast<double>(r.epoch))) << "," << fmt(sy(r.*field)) << " ";
        svg << "'/>\n";
    }
}

std::string mixed_fraction_summary(const Curve& c) {
    // thirds of the run as a coarse stage summary
    const std::size_t n = c.history.size();
    if (n == 0) return "";
    auto mean_range = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t i = a; i < b; ++i) s += c.history[i].mixed_fraction;
        return b > a ? s / static_cast<double>(b - a) : 0.0;
    };
    const std::size_t t1 = n / 3, t2 = 2 * n / 3;
    std::ostringstream os;
    os << c.label << ": mixed fraction " << fmt(mean_range(0, std::max<std::size_t>(t1, 1)))
       << " / " << fmt(mean_range(t1, std::max(t2, t1 + 1))) << " / "
       << fmt(mean_range(t2, n)) << " (early/mid/late)";
    return os.str();
}

} // namespace

std::string render_svg(const std::vector<Curve>& curves) {
    if (curves.empty()) throw config_error("plot: no input curves");
    for (const auto& c : curves)
        if (c.history.empty()) throw config_error("plot: empty metrics for " + c.label);

    const double legend_h = 18.0 * static_cast<double>(curves.size()) + 10.0;
    const double total_h = 2 * kPanelHeight + legend_h + 16.0;

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << fmt(kWidth) << "' height='"
        << fmt(total_h) << "' viewBox='0 0 " << fmt(kWidth) << " " << fmt(total_h) << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";

    render_panel(svg, curves, 0.0, "clean test loss", &MetricsRecord::test_loss);
    render_panel(svg, curves, kPanelHeight, "clean test accuracy", &MetricsRecord::test_accuracy);

    double ly = 2 * kPanelHeight + 14.0;
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const char* color = kPalette[ci % (sizeof kPalette / sizeof *kPalette)];
        svg << "<line x1='" << fmt(kMarginLeft) << "' y1='" << fmt(ly) << "' x2='"
            << fmt(kMarginLeft + 24) << "' y2='" << fmt(ly) << "' stroke='" << color
            << "' stroke-width='2'/>\n";
        svg << "<text x='" << fmt(kMarginLeft + 30) << "' y='" << fmt(ly + 4)
            << "' font-family='sans-serif' font-size='11'>" << mixed_fraction_summary(curves[ci])
            << "</text>\n";
        ly += 18.0;
    }
    svg << "</svg>\n";
    return svg.str();
}

void plot_metrics(const std::vector<std::string>& metrics_files, const std::string& out_path) {
    if (metrics_files.empty()) throw config_error("plot: no input files");
    std::vector<Curve> curves;
    for (const auto& path : metrics_files) {
        Curve c;
        c.label = std::filesystem::path(path).stem().string();
        c.history = harness::metrics_from_csv_file(path);
        curves.push_back(std::move(c));
    }
    std::ofstream out(out_path);
    if (!out) throw data_error(data_error::kind::missing_file, "cannot write " + out_path);
    out << render_svg(curves);
}

} // namespace plot
} // namespace mwh
