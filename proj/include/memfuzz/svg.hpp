#pragma once

#include <algorithm>
#include <charconv>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace memfuzz::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

inline std::string fixed(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return ec == std::errc{} ? std::string(buf, end) : std::string("0");
}

inline std::string escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
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

}  // namespace detail

/// Static SVG 1.1 line plot, one polyline per series, shared axes.
inline std::string line_plot(std::string_view title, std::string_view x_label, std::string_view y_label,
                             std::span<const Series> series) {
  constexpr double kWidth = 640, kHeight = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (!any) {
        x0 = x1 = s.x[k];
        y0 = y1 = s.y[k];
        any = true;
      }
      x0 = std::min(x0, s.x[k]);
      x1 = std::max(x1, s.x[k]);
      y0 = std::min(y0, s.y[k]);
      y1 = std::max(y1, s.y[k]);
    }
  }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };
  using detail::fixed;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         detail::escape(title) + "</text>\n";
  out += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(pw) + "\" height=\"" +
         fixed(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + fixed(kLeft + pw / 2) + "\" y=\"" + fixed(kHeight - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + detail::escape(x_label) +
         "</text>\n";
  out += "<text x=\"16\" y=\"" + fixed(kTop + ph / 2) + "\" transform=\"rotate(-90 16 " + fixed(kTop + ph / 2) +
         ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + detail::escape(y_label) +
         "</text>\n";
  // axis extents
  out += "<text x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop + ph + 16) +
         "\" font-family=\"sans-serif\" font-size=\"10\">" + fixed(x0) + "</text>\n";
  out += "<text x=\"" + fixed(kLeft + pw) + "\" y=\"" + fixed(kTop + ph + 16) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + fixed(x1) + "</text>\n";
  out += "<text x=\"" + fixed(kLeft - 4) + "\" y=\"" + fixed(kTop + ph) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + fixed(y0) + "</text>\n";
  out += "<text x=\"" + fixed(kLeft - 4) + "\" y=\"" + fixed(kTop + 10) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + fixed(y1) + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % std::size(kColors)];
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (k) out += ' ';
      out += fixed(px(s.x[k])) + "," + fixed(py(s.y[k]));
    }
    out += "\"/>\n";
    out += "<text x=\"" + fixed(kLeft + 8) + "\" y=\"" + fixed(kTop + 16 + 14 * static_cast<double>(si)) +
           "\" fill=\"" + color + "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::escape(s.label) +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace memfuzz::svg
