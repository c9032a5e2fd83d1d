#pragma once

#include <vector>

namespace roughdrop {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double max_residual = 0.0;
  double rms_residual = 0.0;
  std::vector<double> residuals;
};

// Ordinary least squares y = intercept + slope * x (at least two points).
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// y = c * x through the origin.
double fit_through_origin(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log y against log x; non-positive values are rejected.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace roughdrop
