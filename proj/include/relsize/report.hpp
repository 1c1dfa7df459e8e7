#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "relsize/evaluator.hpp"

namespace relsize {

struct ReportModes {
  bool plain = true;
  bool balanced = true;
};

struct ReportFormats {
  bool csv = true;
  bool json = true;
  bool svg = true;
};

/// Columns: method,mode,delta1,delta2,delta3,abs_rel,sq_rel,rmse,rmse_log,images,degenerate
std::string report_csv(std::span<const MethodSummary> summaries, ReportModes modes = {});
std::string report_json(std::span<const MethodSummary> summaries, ReportModes modes = {});

/// Grouped δ1 bar chart: one group per method, gray = plain metrics, black = balanced.
std::string report_svg(std::span<const MethodSummary> summaries, ReportModes modes = {});

/// Plot-area height of the SVG chart; a bar of value v is v * kSvgPlotHeight pixels tall.
inline constexpr double kSvgPlotHeight = 300.0;

/// Writes report.csv / report.json / report.svg into out_dir. Throws DataError when
/// summaries is empty and IoError when a file cannot be written.
void render_report(std::span<const MethodSummary> summaries, const std::filesystem::path& out_dir,
                   ReportFormats formats = {}, ReportModes modes = {});

}  // namespace relsize
