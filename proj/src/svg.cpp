#include "crowdlab/svg.hpp"

#include <cstdio>
#include <sstream>

namespace crowdlab {

namespace {

// Fixed-precision formatting keeps output byte-stable.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string SvgScatter::render() const {
  constexpr double kSize = 420.0;
  constexpr double kMargin = 50.0;
  const double span = kSize - 2.0 * kMargin;
  auto px = [&](double x) { return kMargin + x * span; };
  auto py = [&](double y) { return kSize - kMargin - y * span; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n";
  out << "  <rect x=\"" << num(kMargin) << "\" y=\"" << num(kMargin) << "\" width=\"" << num(span)
      << "\" height=\"" << num(span) << "\" fill=\"white\" stroke=\"#444\"/>\n";
  if (diagonal) {
    out << "  <line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(px(1))
        << "\" y2=\"" << num(py(1)) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (double tick : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    out << "  <text x=\"" << num(px(tick)) << "\" y=\"" << num(kSize - kMargin + 18.0)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << num(tick) << "</text>\n";
    out << "  <text x=\"" << num(kMargin - 8.0) << "\" y=\"" << num(py(tick) + 4.0)
        << "\" font-size=\"11\" text-anchor=\"end\">" << num(tick) << "</text>\n";
  }
  for (const Point& p : points) {
    out << "  <circle cx=\"" << num(px(p.x)) << "\" cy=\"" << num(py(p.y)) << "\" r=\""
        << num(p.size) << "\" fill=\"#1f77b4\" fill-opacity=\"0.55\"/>\n";
  }
  out << "  <text x=\"" << num(kSize / 2.0) << "\" y=\"" << num(kMargin - 16.0)
      << "\" font-size=\"14\" text-anchor=\"middle\">" << title << "</text>\n";
  out << "  <text x=\"" << num(kSize / 2.0) << "\" y=\"" << num(kSize - 12.0)
      << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "  <text x=\"14\" y=\"" << num(kSize / 2.0)
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << num(kSize / 2.0) << ")\">" << y_label << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace crowdlab
