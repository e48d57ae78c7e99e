#pragma once

#include <utility>
#include <vector>

#include "cylab/types.hpp"

namespace cylab {

// Ordinary least squares on log-log samples; the workhorse behind every
// measured decay exponent.
struct DecayFit {
    double slope = 0;
    double stderr_ = 0;
    double intercept = 0;
    int n = 0;
    double x_min = 0;
    double x_max = 0;

    // Number of base-10 decades spanned by the abscissas.
    double decades() const;
};

// Fits log|y| = slope * log x + intercept. Points with y == 0 are dropped.
DecayFit fit_loglog(const std::vector<std::pair<double, double>>& xy);

}  // namespace cylab
