#include "sigmalab/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace sigmalab {

static_assert(std::endian::native == std::endian::little,
              "field serialization assumes a little-endian host");

namespace {
constexpr char kMagic[4] = {'S', 'G', 'F', '1'};
}

void write_field_binary(const Field& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out.write(kMagic, 4);
  const std::uint32_t n = static_cast<std::uint32_t>(f.grid.dimension);
  const std::uint32_t pts = static_cast<std::uint32_t>(f.grid.points_per_axis);
  const double box = f.grid.box_length;
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&pts), sizeof pts);
  out.write(reinterpret_cast<const char*>(&box), sizeof box);
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

Field read_field_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("bad field file magic in " + path.string());
  std::uint32_t n = 0, pts = 0;
  double box = 0.0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&pts), sizeof pts);
  in.read(reinterpret_cast<char*>(&box), sizeof box);
  Field f;
  f.grid = make_grid(static_cast<int>(n), static_cast<int>(pts), box);
  f.values.resize(f.grid.total_points());
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated field file " + path.string());
  return f;
}

void write_field_csv(const Field& f, const std::filesystem::path& path) {
  if (f.grid.dimension != 1)
    throw std::invalid_argument("write_field_csv supports n = 1 only");
  CsvWriter csv(path, {"x", "value"});
  for (int i = 0; i < f.grid.points_per_axis; ++i)
    csv.row({f.grid.coordinate(i), f.values[static_cast<std::size_t>(i)]});
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& columns)
    : out_(path), columns_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path.string());
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw std::invalid_argument("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << (i ? "," : "") << format_double(values[i]);
  out_ << "\n";
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::invalid_argument("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << (i ? "," : "") << cells[i];
  out_ << "\n";
}

namespace {
std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}
} // namespace

std::map<std::string, std::string> parse_kv_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": empty key");
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> parse_kv_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kv_text(buf.str());
}

void write_kv_file(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
}

SvgLogLogPlot::SvgLogLogPlot(std::string title, std::string x_label,
                             std::string y_label)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {}

void SvgLogLogPlot::add_series(const std::string& name,
                               const std::vector<double>& xs,
                               const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("SvgLogLogPlot: size mismatch");
  series_.push_back({name, xs, ys});
}

void SvgLogLogPlot::add_guide(const std::string& name, double slope, double x0,
                              double y0) {
  guides_.push_back({name, slope, x0, y0});
}

void SvgLogLogPlot::write(const std::filesystem::path& path) const {
  constexpr double W = 640.0, H = 480.0, ML = 70.0, MR = 20.0, MT = 40.0,
                   MB = 50.0;
  double lx_min = 0.0, lx_max = 1.0, ly_min = 0.0, ly_max = 1.0;
  bool first = true;
  for (const auto& s : series_) {
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!(s.xs[i] > 0.0) || !(s.ys[i] > 0.0)) continue;
      const double lx = std::log10(s.xs[i]), ly = std::log10(s.ys[i]);
      if (first) {
        lx_min = lx_max = lx;
        ly_min = ly_max = ly;
        first = false;
      } else {
        lx_min = std::min(lx_min, lx);
        lx_max = std::max(lx_max, lx);
        ly_min = std::min(ly_min, ly);
        ly_max = std::max(ly_max, ly);
      }
    }
  }
  if (lx_max - lx_min < 1e-12) lx_max = lx_min + 1.0;
  if (ly_max - ly_min < 1e-12) ly_max = ly_min + 1.0;

  const auto px = [&](double lx) {
    return ML + (lx - lx_min) / (lx_max - lx_min) * (W - ML - MR);
  };
  const auto py = [&](double ly) {
    return H - MB - (ly - ly_min) / (ly_max - ly_min) * (H - MT - MB);
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">"
      << title_ << "</text>\n";
  out << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR
      << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML
      << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\">" << x_label_ << " (log10)</text>\n";
  out << "<text x=\"16\" y=\"" << H / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << H / 2
      << ")\">" << y_label_ << " (log10)</text>\n";

  // Decade ticks.
  for (int d = static_cast<int>(std::ceil(lx_min));
       d <= static_cast<int>(std::floor(lx_max)); ++d) {
    out << "<line x1=\"" << px(d) << "\" y1=\"" << H - MB << "\" x2=\""
        << px(d) << "\" y2=\"" << H - MB + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(d) << "\" y=\"" << H - MB + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ly_min));
       d <= static_cast<int>(std::floor(ly_max)); ++d) {
    out << "<line x1=\"" << ML - 5 << "\" y1=\"" << py(d) << "\" x2=\"" << ML
        << "\" y2=\"" << py(d) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ML - 8 << "\" y=\"" << py(d) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
  }

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};
  int color_idx = 0;
  double legend_y = MT + 8.0;
  for (const auto& s : series_) {
    const char* color = colors[color_idx++ % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!(s.xs[i] > 0.0) || !(s.ys[i] > 0.0)) continue;
      out << px(std::log10(s.xs[i])) << "," << py(std::log10(s.ys[i])) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << W - MR - 4 << "\" y=\"" << legend_y
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">"
        << s.name << "</text>\n";
    legend_y += 14.0;
  }
  for (const auto& g : guides_) {
    if (!(g.x0 > 0.0) || !(g.y0 > 0.0)) continue;
    const double ly0 = std::log10(g.y0) + g.slope * (lx_min - std::log10(g.x0));
    const double ly1 = std::log10(g.y0) + g.slope * (lx_max - std::log10(g.x0));
    out << "<line x1=\"" << px(lx_min) << "\" y1=\"" << py(ly0) << "\" x2=\""
        << px(lx_max) << "\" y2=\"" << py(ly1)
        << "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";
    out << "<text x=\"" << W - MR - 4 << "\" y=\"" << legend_y
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"#888888\">" << g.name
        << "</text>\n";
    legend_y += 14.0;
  }
  out << "</svg>\n";
}

} // namespace sigmalab
