#include "liouville/plot_svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "liouville/error.hpp"

namespace liouville {

namespace {

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

}  // namespace

void plot_svg(const std::string& csv_path, const std::vector<std::string>& columns, const std::string& out_path,
              const PlotOptions& options) {
  if (columns.empty()) throw Error("plot: no columns requested");
  std::ifstream in(csv_path);
  if (!in) throw Error("cannot open '" + csv_path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error("'" + csv_path + "' has no rows");
  const std::vector<std::string> header = split(line);
  const auto find = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error("missing column '" + name + "' in '" + csv_path + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t xi = find(options.x_column);
  std::vector<std::size_t> yi;
  for (const std::string& c : columns) yi.push_back(find(c));

  std::vector<double> xs;
  std::vector<std::vector<double>> ys(columns.size());
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) throw Error("malformed row in '" + csv_path + "': " + line);
    double x = std::strtod(cells[xi].c_str(), nullptr);
    if (options.log_x) {
      if (!(x > 0.0)) continue;
      x = std::log10(x);
    }
    xs.push_back(x);
    for (std::size_t k = 0; k < yi.size(); ++k) ys[k].push_back(std::strtod(cells[yi[k]].c_str(), nullptr));
  }
  if (xs.empty()) throw Error("'" + csv_path + "' has no rows");

  Range xr, yr;
  for (double x : xs) xr.add(x);
  for (const auto& col : ys) {
    for (double y : col) {
      if (std::isfinite(y)) yr.add(y);
    }
  }
  if (!std::isfinite(yr.lo)) throw Error("plot: no finite values in the requested columns");
  xr.pad();
  yr.pad();

  const double left = 70, right = 20, top = 40, bottom = 50;
  const double pw = options.width - left - right;
  const double ph = options.height - top - bottom;
  const auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto py = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!options.title.empty()) {
    svg << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\">" << options.title << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * k / 4.0;
    const double xl = options.log_x ? std::pow(10.0, fx) : fx;
    svg << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">" << label(xl)
        << "</text>\n";
    svg << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(fy) + 4) << "\" text-anchor=\"end\">" << label(fy)
        << "</text>\n";
  }
  svg << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(options.height - 10.0) << "\" text-anchor=\"middle\">"
      << options.x_column << (options.log_x ? " (log)" : "") << "</text>\n";
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(ys[k][i])) continue;
      svg << (first ? "" : " ") << num(px(xs[i])) << ',' << num(py(ys[k][i]));
      first = false;
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << num(left + 8) << "\" y=\"" << num(top + 16 + 14.0 * k) << "\" fill=\"" << color << "\">"
        << columns[k] << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot write '" + out_path + "'");
  out << svg.str();
}

}  // namespace liouville
