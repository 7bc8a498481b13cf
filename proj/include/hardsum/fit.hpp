#pragma once

// Log-log regression of lower-bound and measured-cost curves.

#include "hardsum/instance.hpp"

#include <vector>

namespace hardsum {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  int points = 0;
};

// Ordinary least squares on (log x, log y). Requires at least 4 distinct
// predictor values and strictly positive data.
FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Lower-bound curve per the closed-form rate expressions, one value per
// predictor. `predictor` selects which argument varies: the others are held
// at the supplied values. For the strongly convex family the logarithmic
// factor is divided out so the fitted slope is the pure power.
enum class FitPredictor { N, Eps };

std::vector<double> bound_curve(Family f, FitPredictor predictor,
                                const std::vector<double>& values, double n,
                                double L, double sigma_or_B, double Delta,
                                double eps, bool compensate_log = true);

} // namespace hardsum
