#include "relsize/report.hpp"

#include <fstream>

#include <fmt/format.h>

#include "relsize/error.hpp"

namespace relsize {

namespace {

std::string xml_escape(const std::string& s) {
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

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path.string());
  out << text;
  if (!out) throw IoError("write failed", path.string());
}

}  // namespace

std::string report_csv(std::span<const MethodSummary> summaries, ReportModes modes) {
  std::string out = "method,mode,delta1,delta2,delta3,abs_rel,sq_rel,rmse,rmse_log,images,degenerate\n";
  for (const auto& s : summaries) {
    for (const auto& [name, m, on] : {std::tuple{"plain", &s.plain, modes.plain}, {"balanced", &s.balanced, modes.balanced}}) {
      if (!on) continue;
      out += fmt::format("{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{},{}\n", csv_field(s.method), name,
                         m->delta1, m->delta2, m->delta3, m->abs_rel, m->sq_rel, m->rmse, m->rmse_log, s.images,
                         s.degenerate);
    }
  }
  return out;
}

std::string report_json(std::span<const MethodSummary> summaries, ReportModes modes) {
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& s : summaries) {
    nlohmann::json j = {{"method", s.method}, {"images", s.images}, {"degenerate", s.degenerate}};
    if (modes.plain) j["plain"] = to_json(s.plain);
    if (modes.balanced) j["balanced"] = to_json(s.balanced);
    methods.push_back(std::move(j));
  }
  return nlohmann::json{{"methods", methods}}.dump(2) + "\n";
}

std::string report_svg(std::span<const MethodSummary> summaries, ReportModes modes) {
  constexpr double left = 60, top = 40, bar_w = 22, bar_gap = 4, group_gap = 28, bottom = 110;
  const int bars = (modes.plain ? 1 : 0) + (modes.balanced ? 1 : 0);
  const double group_w = bars * bar_w + (bars > 1 ? bar_gap : 0);
  const double plot_w = summaries.size() * (group_w + group_gap) + group_gap;
  const double width = left + plot_w + 20;
  const double height = top + kSvgPlotHeight + bottom;
  const double base = top + kSvgPlotHeight;

  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      width, height, width, height);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", width, height);
  out += fmt::format("<text x=\"{:.2f}\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">&#948;1 accuracy</text>\n",
                     left + plot_w / 2);

  for (int tick = 0; tick <= 10; ++tick) {
    const double y = base - tick / 10.0 * kSvgPlotHeight;
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#dddddd\"/>\n", left, y,
                       left + plot_w, y);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.1f}</text>\n", left - 6, y + 4,
                       tick / 10.0);
  }
  out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", left, top,
                     base);
  out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{2:.2f}\" x2=\"{1:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", left,
                     left + plot_w, base);

  double x = left + group_gap;
  for (const auto& s : summaries) {
    const std::string name = xml_escape(s.method);
    double bx = x;
    for (const auto& [mode, fill, value, on] :
         {std::tuple{"plain", "#a0a0a0", s.plain.delta1, modes.plain},
          {"balanced", "#000000", s.balanced.delta1, modes.balanced}}) {
      if (!on) continue;
      const double h = value * kSvgPlotHeight;
      out += fmt::format(
          "<rect class=\"bar-{}\" data-method=\"{}\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" "
          "fill=\"{}\"><title>{} {}: {:.4f}</title></rect>\n",
          mode, name, bx, base - h, bar_w, h, fill, name, mode, value);
      bx += bar_w + bar_gap;
    }
    const double cx = x + group_w / 2;
    out += fmt::format(
        "<text x=\"{0:.2f}\" y=\"{1:.2f}\" text-anchor=\"end\" transform=\"rotate(-35 {0:.2f} {1:.2f})\">{2}</text>\n",
        cx, base + 14, name);
    x += group_w + group_gap;
  }

  double lx = left + 8;
  const double ly = height - 16;
  if (modes.plain) {
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"10\" height=\"10\" fill=\"#a0a0a0\"/>\n", lx, ly - 9);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">plain</text>\n", lx + 14, ly);
    lx += 70;
  }
  if (modes.balanced) {
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"10\" height=\"10\" fill=\"#000000\"/>\n", lx, ly - 9);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">balanced (rescaled objects)</text>\n", lx + 14, ly);
  }
  out += "</svg>\n";
  return out;
}

void render_report(std::span<const MethodSummary> summaries, const std::filesystem::path& out_dir,
                   ReportFormats formats, ReportModes modes) {
  if (summaries.empty()) throw DataError("no summaries to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory", out_dir.string());
  if (formats.csv) write_text(out_dir / "report.csv", report_csv(summaries, modes));
  if (formats.json) write_text(out_dir / "report.json", report_json(summaries, modes));
  if (formats.svg) write_text(out_dir / "report.svg", report_svg(summaries, modes));
}

}  // namespace relsize
