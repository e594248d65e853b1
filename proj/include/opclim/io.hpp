#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>

#include "opclim/engine.hpp"
#include "opclim/metrics.hpp"
#include "opclim/sweep.hpp"

namespace opclim {

// 17 significant digits ("%.17g"): enough to round-trip any double.
std::string format_number(double value);

// year,mean_opinion,emissions_model,emissions_display,carbon,anomaly,response
void write_timeseries_csv(std::ostream& out, const TimeSeries& series);
// Same columns, each holding the pointwise replicate mean (or std).
void write_replicate_summary_csv(std::ostream& out, const ReplicateSummary& summary, bool write_std);
// year,bin_left,bin_right,fraction
void write_snapshots_csv(std::ostream& out, const TimeSeries& series);
// replicate,seed,<summary_csv_header()>
void write_summary_csv(std::ostream& out, std::span<const RunSummary> summaries,
                       std::span<const std::uint64_t> seeds);
// cell,x_parameter,x,y_parameter,y,metric,mean,std,n,status,diagnostic
void write_sweep_long_csv(std::ostream& out, const SweepResult& result);
// Rectangular grid of replicate means: the header holds the x values, each
// row starts with its y value. One-axis sweeps produce a single row.
void write_heatmap_csv(std::ostream& out, const SweepResult& result, Metric metric);
// index,level,m_cost,r_max,alpha,mean_peak_year,error,status
void write_calibration_trace_csv(std::ostream& out, const CalibrationResult& result);

}  // namespace opclim
