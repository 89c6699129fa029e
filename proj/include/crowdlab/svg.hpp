#pragma once

#include <string>
#include <vector>

namespace crowdlab {

// Minimal scatter plot on the unit square with a y=x reference line.
// Everything is deterministic text output.
struct SvgScatter {
  std::string title;
  std::string x_label;
  std::string y_label;
  struct Point {
    double x = 0.0;
    double y = 0.0;
    double size = 3.0;
  };
  std::vector<Point> points;
  bool diagonal = true;

  std::string render() const;
};

}  // namespace crowdlab
