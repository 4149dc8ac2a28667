#pragma once

// Support for the command-line front end: flat key=value config files, CSV
// emission with provenance headers, a config hash, and a minimal hand-rolled
// SVG polyline plot. Output formatting is fully deterministic so identical
// configs produce byte-identical files.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vacant {

using KVMap = std::map<std::string, std::string>;

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

/// Flat key=value file; blank lines and '#' comments are skipped.
inline KVMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not readable: " + path);
  KVMap kv;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + t);
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

inline std::uint64_t fnv1a64(const std::string& data, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Hash over the sorted key=value pairs. Execution knobs (parallel width,
/// config path) are excluded: they may not change results.
inline std::string config_hash_hex(const KVMap& kv) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& [k, v] : kv) {
    if (k == "parallel" || k == "config") continue;
    h = fnv1a64(k + "=" + v + "\n", h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// CSV with '#'-prefixed provenance comments, a header row, then data rows.
class CsvWriter {
 public:
  void comment(const std::string& line) { comments_ += "# " + line + "\n"; }

  void provenance(const std::string& subcommand, const KVMap& config) {
    comment("vacantwalk " + subcommand);
    for (const auto& [k, v] : config) {
      if (k == "parallel" || k == "config") continue;
      comment(k + "=" + v);
    }
    comment("config_hash=" + config_hash_hex(config));
  }

  void header(const std::vector<std::string>& cols) { row_line(cols); }

  void cell(std::string v) { current_.push_back(std::move(v)); }
  void cell(const char* v) { current_.emplace_back(v); }
  void cell(double v) { current_.push_back(format_double(v)); }
  void cell(std::int64_t v) { current_.push_back(std::to_string(v)); }
  void cell(std::uint64_t v) { current_.push_back(std::to_string(v)); }
  void cell(int v) { current_.push_back(std::to_string(v)); }

  void end_row() {
    row_line(current_);
    current_.clear();
  }

  std::string str() const { return comments_ + body_; }

  void write(const std::string& path) const {
    if (path.empty() || path == "-") {
      std::fputs(str().c_str(), stdout);
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << str();
    if (!out) throw std::runtime_error("write failed: " + path);
  }

 private:
  void row_line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) body_ += ',';
      body_ += cells[i];
    }
    body_ += '\n';
  }

  std::string comments_;
  std::string body_;
  std::vector<std::string> current_;
};

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Minimal vector plot: axes, ticks, one polyline per series.
inline std::string render_svg(const std::string& title, const std::string& xlabel,
                              const std::string& ylabel, const std::vector<SvgSeries>& series) {
  const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
  }
  if (ymin > ymax) {
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
      << "</text>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
      << H - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5, yv = ymin + (ymax - ymin) * i / 5;
    svg << "<line x1=\"" << px(xv) << "\" y1=\"" << H - mb << "\" x2=\"" << px(xv) << "\" y2=\""
        << H - mb + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(xv) << "\" y=\"" << H - mb + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(xv) << "</text>\n";
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << ml << "\" y2=\""
        << py(yv) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(yv) << "</text>\n";
  }
  svg << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n";
  svg << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << (mt + H - mb) / 2 << ")\">" << ylabel << "</text>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  int ci = 0;
  for (const auto& s : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << colors[ci % 4] << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : s.points) svg << format_double(px(x)) << "," << format_double(py(y)) << " ";
    svg << "\"/>\n";
    svg << "<text x=\"" << W - mr - 6 << "\" y=\"" << mt + 16 + 16 * ci
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[ci % 4] << "\">" << s.label
        << "</text>\n";
    ++ci;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace vacant
