#pragma once

#include <span>
#include <string>

#include "hotspot/common/image.hpp"

namespace hotspot::metrics {

// 2|A∩B| / (|A|+|B|); 1.0 when both masks are empty. Dimensions must agree.
double dice_compare(const Mask& a, const Mask& b);

struct DiceSummary {
  double mean = 0;
  double std = 0;  // population
  std::size_t count = 0;
};

DiceSummary dice_summary(std::span<const double> values);

// "m±s" with the given decimals for mean and std.
std::string format_summary(const DiceSummary& s, int mean_decimals = 4, int std_decimals = 2);

}  // namespace hotspot::metrics
