#pragma once

#include <span>
#include <vector>

namespace least {

/// Median by selection; the mean of the two middle values for even counts.
/// Throws std::invalid_argument on empty input.
double median(std::vector<double> values);

double mean(std::span<const double> values);

/// Population standard deviation (zero for a single value).
double population_std(std::span<const double> values);

}  // namespace least
