#include "ccinterp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "ccinterp/errors.hpp"
#include "ccinterp/hash.hpp"

namespace ccinterp {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoFailure("write to '" + path.string() + "' failed");
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
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

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw ShapeMismatch("CSV row has " + std::to_string(row.size()) + " cells, expected " +
                        std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string CsvTable::render(std::uint64_t config_checksum) const {
  std::string out = "# config_checksum=" + hex64(config_checksum) + "\n";
  const auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out += (k ? "," : "") + cells[k];
    out += "\n";
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table,
               std::uint64_t config_checksum) {
  write_text(path, table.render(config_checksum));
}

std::string cell(double v) {
  if (std::isnan(v)) return "nan";
  return fmt("%.10g", v);
}

std::string cell(long long v) { return std::to_string(v); }

std::string render_svg(const PlotSpec& plot) {
  constexpr double W = 640, H = 420, L = 70, R = 160, T = 40, B = 50;
  const double pw = W - L - R, ph = H - T - B;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  const auto yval = [&plot](double y) { return plot.log_y ? std::log10(y) : y; };
  const auto usable = [&plot](double y) { return std::isfinite(y) && (!plot.log_y || y > 0.0); };
  for (const auto& s : plot.series) {
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!usable(s.y[k]) || !std::isfinite(s.x[k])) continue;
      xmin = std::min(xmin, s.x[k]);
      xmax = std::max(xmax, s.x[k]);
      ymin = std::min(ymin, yval(s.y[k]));
      ymax = std::max(ymax, yval(s.y[k]));
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  const auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) { return T + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", W) + "\" height=\"" +
       fmt("%.0f", H) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt("%.1f", L + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
       escape_xml(plot.title) + "</text>\n";
  s += "<rect x=\"" + fmt("%.1f", L) + "\" y=\"" + fmt("%.1f", T) + "\" width=\"" + fmt("%.1f", pw) +
       "\" height=\"" + fmt("%.1f", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 5.0;
    const double yv = ymin + (ymax - ymin) * k / 5.0;
    s += "<text x=\"" + fmt("%.1f", px(xv)) + "\" y=\"" + fmt("%.1f", T + ph + 16) +
         "\" text-anchor=\"middle\">" + fmt("%.3g", xv) + "</text>\n";
    const std::string ylab = plot.log_y ? "1e" + fmt("%.1f", yv) : fmt("%.3g", yv);
    s += "<text x=\"" + fmt("%.1f", L - 6) + "\" y=\"" + fmt("%.1f", py(yv) + 4) +
         "\" text-anchor=\"end\">" + ylab + "</text>\n";
    s += "<line x1=\"" + fmt("%.1f", L) + "\" x2=\"" + fmt("%.1f", L + pw) + "\" y1=\"" +
         fmt("%.1f", py(yv)) + "\" y2=\"" + fmt("%.1f", py(yv)) + "\" stroke=\"#ddd\"/>\n";
  }
  s += "<text x=\"" + fmt("%.1f", L + pw / 2) + "\" y=\"" + fmt("%.1f", H - 12) +
       "\" text-anchor=\"middle\">" + escape_xml(plot.x_label) + "</text>\n";
  s += "<text transform=\"translate(16," + fmt("%.1f", T + ph / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">" +
       escape_xml(plot.log_y ? "log10 " + plot.y_label : plot.y_label) + "</text>\n";

  for (std::size_t si = 0; si < plot.series.size(); ++si) {
    const auto& ser = plot.series[si];
    const std::string color = kPalette[si % std::size(kPalette)];
    std::string pts;
    for (std::size_t k = 0; k < ser.x.size() && k < ser.y.size(); ++k) {
      if (!usable(ser.y[k])) continue;
      pts += fmt("%.2f", px(ser.x[k])) + "," + fmt("%.2f", py(yval(ser.y[k]))) + " ";
      if (ser.markers) {
        s += "<circle cx=\"" + fmt("%.2f", px(ser.x[k])) + "\" cy=\"" +
             fmt("%.2f", py(yval(ser.y[k]))) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
      }
    }
    s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts +
         "\"/>\n";
    const double ly = T + 14 + 18 * static_cast<double>(si);
    s += "<line x1=\"" + fmt("%.1f", L + pw + 10) + "\" x2=\"" + fmt("%.1f", L + pw + 30) + "\" y1=\"" +
         fmt("%.1f", ly - 4) + "\" y2=\"" + fmt("%.1f", ly - 4) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fmt("%.1f", L + pw + 34) + "\" y=\"" + fmt("%.1f", ly) + "\">" +
         escape_xml(ser.name) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void write_svg(const std::filesystem::path& path, const PlotSpec& plot) {
  write_text(path, render_svg(plot));
}

}  // namespace ccinterp
