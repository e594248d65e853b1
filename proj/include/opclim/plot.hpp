#pragma once

#include <span>
#include <string>
#include <vector>

#include "opclim/engine.hpp"
#include "opclim/sweep.hpp"

namespace opclim {

// Minimal self-contained SVG output. CSV stays the canonical result format.

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, std::span<const LineSeries> series);

// Three stacked panels: mean opinion, reported emissions, anomaly.
std::string svg_timeseries(const TimeSeries& series);

// Replicate means per cell: a heatmap for two-axis sweeps, a line otherwise.
std::string svg_sweep(const SweepResult& result, Metric metric);

}  // namespace opclim
