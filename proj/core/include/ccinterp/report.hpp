#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ccinterp {

/// CSV table. The file starts with a `# config_checksum=<hex>` comment line,
/// followed by the column header row.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string render(std::uint64_t config_checksum) const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table,
               std::uint64_t config_checksum);

/// Number formatting for CSV cells (%.10g, "nan" for NaN).
std::string cell(double v);
std::string cell(long long v);
inline std::string cell(int v) { return cell(static_cast<long long>(v)); }
inline std::string cell(std::size_t v) { return cell(static_cast<long long>(v)); }

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;  // plots log10(y); non-positive values are skipped
  std::vector<PlotSeries> series;
};

/// Minimal static line plot.
std::string render_svg(const PlotSpec& plot);
void write_svg(const std::filesystem::path& path, const PlotSpec& plot);

}  // namespace ccinterp
