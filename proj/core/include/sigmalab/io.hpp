//==============================================================================
// io.hpp
// Flat binary and CSV field serialization, deterministic CSV emission,
// key = value run configs, and a minimal log-log SVG plotter.
//==============================================================================
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "sigmalab/grid.hpp"

namespace sigmalab {

// Little-endian layout: magic "SGF1", u32 n, u32 N, f64 L, then N^n f64
// values in row-major order.
void write_field_binary(const Field& f, const std::filesystem::path& path);
Field read_field_binary(const std::filesystem::path& path);

// Two columns x,value; n = 1 only.
void write_field_csv(const Field& f, const std::filesystem::path& path);

// %.17g formatting so reruns with the same inputs are byte-identical.
std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

// Flat key = value config; '#' starts a comment, blanks ignored.
std::map<std::string, std::string> parse_kv_text(const std::string& text);
std::map<std::string, std::string> parse_kv_file(
    const std::filesystem::path& path);
void write_kv_file(const std::filesystem::path& path,
                   const std::vector<std::pair<std::string, std::string>>& kv);

// Minimal log-log plot: one polyline per series plus optional slope guides.
class SvgLogLogPlot {
 public:
  SvgLogLogPlot(std::string title, std::string x_label, std::string y_label);
  void add_series(const std::string& name, const std::vector<double>& xs,
                  const std::vector<double>& ys);
  // Dashed reference line through (x0, y0) with the given log-log slope,
  // drawn across the full abscissa range of the plot.
  void add_guide(const std::string& name, double slope, double x0, double y0);
  void write(const std::filesystem::path& path) const;

 private:
  struct Series {
    std::string name;
    std::vector<double> xs, ys;
  };
  struct Guide {
    std::string name;
    double slope, x0, y0;
  };
  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  std::vector<Guide> guides_;
};

} // namespace sigmalab
