#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "droplin/errors.hpp"

namespace droplin::tool {

namespace {

constexpr double kW = 820, kH = 480;
constexpr double kL = 78, kR = 24, kT = 46, kB = 56;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string pt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Axis {
  double lo, hi;
  bool log;

  double place(double v, double out_lo, double out_hi) const {
    const double t = log ? (std::log10(v) - std::log10(lo)) /
                               (std::log10(hi) - std::log10(lo))
                         : (v - lo) / (hi - lo);
    return out_lo + t * (out_hi - out_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int e0 = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
      const int e1 = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
      for (int e = e0; e <= e1; ++e) out.push_back(std::pow(10.0, e));
      if (out.size() < 2) {
        out = {lo, hi};
      }
      return out;
    }
    const double range = hi - lo;
    if (range <= 0.0) return {lo};
    double step = std::pow(10.0, std::floor(std::log10(range / 5.0)));
    for (double m : {5.0, 2.0, 1.0})
      if (range / (step * m) >= 4.0) {
        step *= m;
        break;
      }
    const double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + step * 1e-9; v += step)
      out.push_back(std::fabs(v) < step * 1e-9 ? 0.0 : v);
    return out;
  }
};

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

void open_svg(std::ofstream& f, const std::string& title) {
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
    << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
    << "\">\n"
    << "<rect width=\"" << kW << "\" height=\"" << kH
    << "\" fill=\"white\"/>\n"
    << "<text x=\"" << kL << "\" y=\"24\" font-family=\"sans-serif\" "
       "font-size=\"14\" fill=\"#222\">"
    << xml_escape(title) << "</text>\n";
}

void draw_frame(std::ofstream& f, const Axis& x, const Axis& y,
                const std::string& xlabel, const std::string& ylabel) {
  f << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR
    << "\" height=\"" << kH - kT - kB
    << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (double v : x.ticks()) {
    const double px = x.place(v, kL, kW - kR);
    f << "<line x1=\"" << pt(px) << "\" y1=\"" << kH - kB << "\" x2=\""
      << pt(px) << "\" y2=\"" << kH - kB + 5 << "\" stroke=\"#444\"/>\n"
      << "<text x=\"" << pt(px) << "\" y=\"" << kH - kB + 19
      << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\" "
         "text-anchor=\"middle\">"
      << num(v) << "</text>\n";
  }
  for (double v : y.ticks()) {
    const double py = y.place(v, kH - kB, kT);
    f << "<line x1=\"" << kL - 5 << "\" y1=\"" << pt(py) << "\" x2=\"" << kL
      << "\" y2=\"" << pt(py) << "\" stroke=\"#444\"/>\n"
      << "<text x=\"" << kL - 8 << "\" y=\"" << pt(py + 4)
      << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\" "
         "text-anchor=\"end\">"
      << num(v) << "</text>\n";
  }
  f << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 12
    << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\" "
       "text-anchor=\"middle\">"
    << xlabel << "</text>\n"
    << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2
    << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\" "
       "text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << (kT + kH - kB) / 2 << ")\">" << ylabel << "</text>\n";
}

void polyline(std::ofstream& f, const Axis& x, const Axis& y,
              const std::vector<double>& xs, const std::vector<double>& ys,
              const std::string& color) {
  f << "<polyline fill=\"none\" stroke=\"" << color
    << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) f << " ";
    f << pt(x.place(xs[i], kL, kW - kR)) << ","
      << pt(y.place(ys[i], kH - kB, kT));
  }
  f << "\"/>\n";
}

}  // namespace

void write_convergence_svg(const std::string& path, const TrainTrace& trace,
                           double optimal, const std::string& title) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);

  std::vector<double> xs(trace.steps.begin(), trace.steps.end());
  double ylo = optimal > 0.0 ? optimal : std::numeric_limits<double>::infinity();
  double yhi = optimal;
  bool positive = optimal > 0.0;
  auto fold = [&](const std::vector<double>& ys) {
    for (double v : ys) {
      if (v <= 0.0) positive = false;
      ylo = std::min(ylo, v);
      yhi = std::max(yhi, v);
    }
  };
  fold(trace.objective);
  fold(trace.importance_variance);
  if (positive && ylo > 0.0 && yhi / ylo >= 20.0) {
    // decade padding keeps curves off the frame
    ylo = std::pow(10.0, std::floor(std::log10(ylo)));
    yhi = std::pow(10.0, std::ceil(std::log10(yhi)));
  } else {
    positive = false;
    const double pad = 0.05 * (yhi - ylo + 1e-12);
    ylo -= pad;
    yhi += pad;
  }
  const Axis x{0.0, xs.empty() ? 1.0 : std::max(1.0, xs.back()), false};
  const Axis y{ylo, yhi, positive};

  open_svg(f, title);
  draw_frame(f, x, y, "step", positive ? "value (log)" : "value");
  if (optimal > y.lo || (!positive && optimal >= y.lo)) {
    const double py = y.place(std::max(optimal, y.lo), kH - kB, kT);
    f << "<line x1=\"" << kL << "\" y1=\"" << pt(py) << "\" x2=\"" << kW - kR
      << "\" y2=\"" << pt(py)
      << "\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>\n";
  }
  polyline(f, x, y, xs, trace.objective, "#1f77b4");
  polyline(f, x, y, xs, trace.importance_variance, "#ff7f0e");

  const double lx = kW - kR - 230, ly = kT + 14;
  const char* entries[][2] = {{"#1f77b4", "objective"},
                              {"#ff7f0e", "importance variance"},
                              {"#d62728", "analytic optimum"}};
  for (int i = 0; i < 3; ++i) {
    f << "<line x1=\"" << lx << "\" y1=\"" << ly + 16 * i << "\" x2=\""
      << lx + 24 << "\" y2=\"" << ly + 16 * i << "\" stroke=\""
      << entries[i][0] << "\""
      << (i == 2 ? " stroke-dasharray=\"6 4\"" : "") << "/>\n"
      << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 16 * i + 4
      << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">"
      << entries[i][1] << "</text>\n";
  }
  f << "</svg>\n";
  if (!f) throw Error("write failed: " + path);
}

void write_contour_svg(const std::string& path, const LandscapeGrid& grid,
                       const std::string& title) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  const Axis x{grid.grid_min, grid.grid_max, false};
  const Axis y{grid.grid_min, grid.grid_max, false};
  open_svg(f, title);
  draw_frame(f, x, y, "u1", "u2");

  double vmax = grid.min_value;
  for (double v : grid.values) vmax = std::max(vmax, v);
  const std::size_t n = grid.n;

  // Marching squares, 12 levels packed quadratically toward the
  // minimum where the landscape has its structure.
  for (int k = 1; k <= 12; ++k) {
    const double t = static_cast<double>(k) / 13.0;
    const double level = grid.min_value + (vmax - grid.min_value) * t * t;
    std::ostringstream d;
    auto cross = [&](double va, double vb) { return (level - va) / (vb - va); };
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = 0; j + 1 < n; ++j) {
        // corner values; u1 runs over rows, u2 over columns
        const double v00 = grid.values[i * n + j];
        const double v01 = grid.values[i * n + j + 1];
        const double v10 = grid.values[(i + 1) * n + j];
        const double v11 = grid.values[(i + 1) * n + j + 1];
        const double x0 = grid.coord(i), x1c = grid.coord(i + 1);
        const double y0 = grid.coord(j), y1c = grid.coord(j + 1);
        struct P {
          double u1, u2;
        };
        P pts[4];
        int np = 0;
        if ((v00 < level) != (v01 < level))
          pts[np++] = {x0, y0 + cross(v00, v01) * (y1c - y0)};
        if ((v10 < level) != (v11 < level))
          pts[np++] = {x1c, y0 + cross(v10, v11) * (y1c - y0)};
        if ((v00 < level) != (v10 < level))
          pts[np++] = {x0 + cross(v00, v10) * (x1c - x0), y0};
        if ((v01 < level) != (v11 < level))
          pts[np++] = {x0 + cross(v01, v11) * (x1c - x0), y1c};
        if (np >= 2) {
          d << "M" << pt(x.place(pts[0].u1, kL, kW - kR)) << " "
            << pt(y.place(pts[0].u2, kH - kB, kT)) << "L"
            << pt(x.place(pts[1].u1, kL, kW - kR)) << " "
            << pt(y.place(pts[1].u2, kH - kB, kT));
          if (np == 4)
            d << "M" << pt(x.place(pts[2].u1, kL, kW - kR)) << " "
              << pt(y.place(pts[2].u2, kH - kB, kT)) << "L"
              << pt(x.place(pts[3].u1, kL, kW - kR)) << " "
              << pt(y.place(pts[3].u2, kH - kB, kT));
        }
      }
    const int shade = 40 + 14 * k;
    f << "<path fill=\"none\" stroke=\"rgb(" << shade / 3 << "," << shade / 2
      << "," << shade << ")\" stroke-width=\"0.8\" d=\"" << d.str()
      << "\"/>\n";
  }

  f << "<circle cx=\"" << pt(x.place(grid.argmin_u1, kL, kW - kR))
    << "\" cy=\"" << pt(y.place(grid.argmin_u2, kH - kB, kT))
    << "\" r=\"4\" fill=\"#d62728\"/>\n"
    << "<text x=\"" << kW - kR - 6 << "\" y=\"" << kT + 16
    << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\" "
       "text-anchor=\"end\">min "
    << num(grid.min_value) << " at (" << num(grid.argmin_u1) << ", "
    << num(grid.argmin_u2) << ")</text>\n</svg>\n";
  if (!f) throw Error("write failed: " + path);
}

}  // namespace droplin::tool
