#pragma once

#include "mwh/harness.hpp"

#include <string>
#include <vector>

namespace mwh {
namespace plot {

struct Curve {
    std::string label;
    std::vector<MetricsRecord> history;
};

// Two stacked panels (clean test loss, clean test accuracy) as one SVG,
// one line per run, with a per-run mixed-fraction summary annotation.
// Throws config_error when curves is empty.
std::string render_svg(const std::vector<Curve>& curves);

// Reads each metrics CSV, renders, writes the SVG. Curve labels are the
// file stems.
void plot_metrics(const std::vector<std::string>& metrics_files, const std::string& out_path);

} // namespace plot
} // namespace mwh
