#pragma once

// Output writers: key=value summaries, CSV tables, static SVG line plots.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace gausson::cli {

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class Summary {
 public:
  void put(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
  void put(const std::string& key, const char* value) { put(key, std::string(value)); }
  void put(const std::string& key, double value) { put(key, format_number(value)); }
  void put(const std::string& key, int value) { put(key, std::to_string(value)); }
  void put(const std::string& key, std::size_t value) { put(key, std::to_string(value)); }
  void put(const std::string& key, bool value) { put(key, value ? "true" : "false"); }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  void write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }

  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }

  std::ofstream out_;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool markers = false;
};

struct HLine {
  double y;
  std::string label;
};

struct Plot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  std::vector<Series> series;
  std::vector<HLine> hlines;
};

namespace detail {

inline std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace detail

/// Writes an SVG line plot. Returns false instead of throwing; plots never fail a run.
inline bool write_svg(const Plot& plot, const std::filesystem::path& path) noexcept {
  try {
    const double W = 720, H = 480, ml = 80, mr = 20, mt = 40, mb = 60;
    auto tx = [&](double v) { return plot.logx ? std::log10(v) : v; };
    auto ty = [&](double v) { return plot.logy ? std::log10(v) : v; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto usable = [&](double x, double y) {
      return std::isfinite(x) && std::isfinite(y) && (!plot.logx || x > 0) && (!plot.logy || y > 0);
    };
    for (const auto& s : plot.series)
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
        if (usable(s.x[i], s.y[i])) {
          x0 = std::min(x0, tx(s.x[i])), x1 = std::max(x1, tx(s.x[i]));
          y0 = std::min(y0, ty(s.y[i])), y1 = std::max(y1, ty(s.y[i]));
        }
    for (const auto& h : plot.hlines)
      if (!plot.logy || h.y > 0) y0 = std::min(y0, ty(h.y)), y1 = std::max(y1, ty(h.y));
    if (!std::isfinite(x0) || !std::isfinite(y0)) return false;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad, y1 += pad;
    auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (ty(v) - y0) / (y1 - y0) * (H - mt - mb); };

    std::ofstream out(path);
    if (!out) return false;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
      const double fx = x0 + (x1 - x0) * i / 5.0, fy = y0 + (y1 - y0) * i / 5.0;
      const double sx = ml + (W - ml - mr) * i / 5.0, sy = H - mb - (H - mt - mb) * i / 5.0;
      out << "<text x=\"" << sx << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\">"
          << format_number(plot.logx ? std::pow(10.0, fx) : fx).substr(0, 8) << "</text>\n";
      out << "<text x=\"" << ml - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">"
          << format_number(plot.logy ? std::pow(10.0, fy) : fy).substr(0, 8) << "</text>\n";
    }
    out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << detail::esc(plot.title)
        << "</text>\n<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
        << detail::esc(plot.xlabel) << "</text>\n<text x=\"18\" y=\"" << H / 2 << "\" transform=\"rotate(-90 18 "
        << H / 2 << ")\" text-anchor=\"middle\">" << detail::esc(plot.ylabel) << "</text>\n";
    for (const auto& h : plot.hlines) {
      if (plot.logy && h.y <= 0) continue;
      out << "<line x1=\"" << ml << "\" x2=\"" << W - mr << "\" y1=\"" << py(h.y) << "\" y2=\"" << py(h.y)
          << "\" stroke=\"gray\" stroke-dasharray=\"5,4\"/>\n<text x=\"" << W - mr - 4 << "\" y=\"" << py(h.y) - 4
          << "\" text-anchor=\"end\" fill=\"gray\">" << detail::esc(h.label) << "</text>\n";
    }
    int legend = 0;
    for (const auto& s : plot.series) {
      std::string pts;
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!usable(s.x[i], s.y[i])) continue;
        const double a = px(s.x[i]), b = py(s.y[i]);
        if (s.markers)
          out << "<circle cx=\"" << a << "\" cy=\"" << b << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
        else
          pts += format_number(a) + "," + format_number(b) + " ";
      }
      if (!pts.empty())
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"" << pts << "\"/>\n";
      if (!s.name.empty()) {
        out << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 16 + 15 * legend++ << "\" fill=\"" << s.color << "\">"
            << detail::esc(s.name) << "</text>\n";
      }
    }
    out << "</svg>\n";
    return static_cast<bool>(out);
  } catch (...) {
    return false;
  }
}

}  // namespace gausson::cli
