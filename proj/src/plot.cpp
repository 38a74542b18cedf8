#include "panelcp/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "panelcp/error.hpp"

namespace panelcp {

namespace {

constexpr const char* kMeanColor = "#b03a2e";
constexpr const char* kVarianceColor = "#1f5f9e";
constexpr const char* kSeriesColor = "#333333";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "start", int size = 11) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\" font-size=\"" +
         std::to_string(size) + "\">" + escape(s) + "</text>\n";
}

std::string vline(double x, double y0, double y1, ChangeKind kind, double width = 1.5) {
  std::string s = "<line x1=\"" + num(x) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x) + "\" y2=\"" + num(y1) +
                  "\" stroke=\"" + (kind == ChangeKind::Mean ? kMeanColor : kVarianceColor) +
                  "\" stroke-width=\"" + num(width) + "\"";
  if (kind == ChangeKind::Variance) s += " stroke-dasharray=\"5,3\"";
  return s + "/>\n";
}

// Tick step giving roughly five ticks over `span`.
int tick_step(int span) {
  for (int step : {1, 2, 5, 10, 20, 25, 50, 100, 200, 250, 500, 1000}) {
    if (span / step <= 6) return step;
  }
  return std::max(1, span / 5);
}

std::vector<const ChangePoint*> all_points(const Analysis& a) {
  std::vector<const ChangePoint*> out;
  for (const auto& cp : a.mean.change_points) out.push_back(&cp);
  if (a.variance) {
    for (const auto& cp : a.variance->change_points) out.push_back(&cp);
  }
  return out;
}

std::string legend(double x, double y) {
  std::string s;
  s += vline(x, y - 9, y + 3, ChangeKind::Mean);
  s += text(x + 6, y, "mean change");
  s += vline(x + 100, y - 9, y + 3, ChangeKind::Variance);
  s += text(x + 106, y, "variance change");
  return s;
}

}  // namespace

std::string plot_panel_svg(const Analysis& a) {
  const Panel& p = a.panel;
  if (p.n() == 0) throw Error(Errc::MalformedResult, "analysis has an empty panel");
  const std::size_t cols = p.n() <= 4 ? 1 : (p.n() <= 8 ? 2 : 4);
  const std::size_t rows = (p.n() + cols - 1) / cols;
  const double cell_w = 300, cell_h = 140, pad_l = 44, pad_r = 10, pad_t = 20, pad_b = 22;
  const double top = 34, bottom = 30;
  const double width = static_cast<double>(cols) * cell_w;
  const double height = top + static_cast<double>(rows) * cell_h + bottom;

  const int t0 = p.time_label(1);
  const int t1 = p.time_label(static_cast<int>(p.T()));
  const double tspan = std::max(1, t1 - t0);
  const int step = tick_step(t1 - t0);
  const auto points = all_points(a);

  std::string svg = header(width, height);
  svg += text(width / 2, 20, a.label, "middle", 14);
  for (std::size_t j = 0; j < p.n(); ++j) {
    const double ox = static_cast<double>(j % cols) * cell_w;
    const double oy = top + static_cast<double>(j / cols) * cell_h;
    const double x0 = ox + pad_l, x1 = ox + cell_w - pad_r;
    const double y0 = oy + pad_t, y1 = oy + cell_h - pad_b;
    const auto row = p.row(j);
    double lo = *std::min_element(row.begin(), row.end());
    double hi = *std::max_element(row.begin(), row.end());
    if (hi - lo < 1e-12) {
      lo -= 1.0;
      hi += 1.0;
    }
    const auto X = [&](double t) { return x0 + (t - t0) / tspan * (x1 - x0); };
    const auto Y = [&](double v) { return y1 - (v - lo) / (hi - lo) * (y1 - y0); };

    svg += "<g>\n";
    svg += text(x0, oy + 14, p.series_ids()[j]);
    svg += "<rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(x1 - x0) + "\" height=\"" +
           num(y1 - y0) + "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";
    for (int t = (t0 + step - 1) / step * step; t <= t1; t += step) {
      svg += text(X(t), y1 + 13, std::to_string(t), "middle", 9);
    }
    svg += text(x0 - 4, y0 + 8, num(hi), "end", 9);
    svg += text(x0 - 4, y1, num(lo), "end", 9);
    for (const ChangePoint* cp : points) {
      const double boundary = cp->index < static_cast<int>(p.T())
                                  ? 0.5 * (p.time_label(cp->index) + p.time_label(cp->index + 1))
                                  : p.time_label(cp->index);
      svg += vline(X(boundary), y0, y1, cp->kind, 1.2);
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(kSeriesColor) + "\" stroke-width=\"1\" points=\"";
    for (std::size_t t = 0; t < p.T(); ++t) {
      if (t) svg += ' ';
      svg += num(X(p.time_index()[t])) + "," + num(Y(row[t]));
    }
    svg += "\"/>\n</g>\n";
  }
  svg += legend(12, height - 10);
  svg += "</svg>\n";
  return svg;
}

std::string plot_timeline_svg(const std::vector<Analysis>& analyses, const std::vector<std::string>& names) {
  if (analyses.empty()) throw Error(Errc::MalformedResult, "no analyses to plot");
  if (!names.empty() && names.size() != analyses.size()) {
    throw Error(Errc::ConfigError, "expected one name per analysis");
  }
  int t0 = analyses.front().panel.time_label(1), t1 = t0;
  for (const auto& a : analyses) {
    t0 = std::min(t0, a.panel.time_label(1));
    t1 = std::max(t1, a.panel.time_label(static_cast<int>(a.panel.T())));
  }
  const double label_w = 170, pad_r = 20, row_h = 22, top = 40, bottom = 50, width = 900;
  const double height = top + row_h * static_cast<double>(analyses.size()) + bottom;
  const double x0 = label_w, x1 = width - pad_r;
  const double tspan = std::max(1, t1 - t0);
  const auto X = [&](double t) { return x0 + (t - t0) / tspan * (x1 - x0); };

  std::string svg = header(width, height);
  svg += text(width / 2, 22, "Change points by franchise", "middle", 14);
  const double axis_y = top + row_h * static_cast<double>(analyses.size()) + 6;
  const int step = tick_step(t1 - t0);
  for (int t = (t0 + step - 1) / step * step; t <= t1; t += step) {
    svg += "<line x1=\"" + num(X(t)) + "\" y1=\"" + num(top) + "\" x2=\"" + num(X(t)) + "\" y2=\"" + num(axis_y) +
           "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    svg += text(X(t), axis_y + 12, std::to_string(t), "middle", 9);
  }
  for (std::size_t i = 0; i < analyses.size(); ++i) {
    const auto& a = analyses[i];
    const double cy = top + row_h * (static_cast<double>(i) + 0.5);
    svg += text(label_w - 8, cy + 4, names.empty() ? a.label : names[i], "end");
    const double bx0 = X(a.panel.time_label(1));
    const double bx1 = X(a.panel.time_label(static_cast<int>(a.panel.T())));
    svg += "<rect x=\"" + num(bx0) + "\" y=\"" + num(cy - 4) + "\" width=\"" + num(bx1 - bx0) +
           "\" height=\"8\" fill=\"#d9d9d9\"/>\n";
    for (const ChangePoint* cp : all_points(a)) {
      svg += vline(X(cp->time_label + 0.5), cy - 8, cy + 8, cp->kind, 2.0);
    }
  }
  svg += legend(12, height - 12);
  svg += "</svg>\n";
  return svg;
}

}  // namespace panelcp
