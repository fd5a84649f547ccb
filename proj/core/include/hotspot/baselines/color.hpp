#pragma once

namespace hotspot::baselines {

struct Lab {
  double l = 0, a = 0, b = 0;
};

struct Hsv {
  double h = 0;  // degrees in [0, 360)
  double s = 0;  // [0, 1]
  double v = 0;  // [0, 1]
};

// sRGB in [0,1] with the D65 white point.
Lab rgb_to_lab(double r, double g, double b);
Hsv rgb_to_hsv(double r, double g, double b);

}  // namespace hotspot::baselines
