#include "hardsum/fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace hardsum {

FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("fit_loglog: size mismatch");
  std::set<double> distinct(x.begin(), x.end());
  if (distinct.size() < 4)
    throw std::invalid_argument("fit_loglog: need at least 4 distinct predictor values");
  const int n = static_cast<int>(x.size());
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("fit_loglog: data must be strictly positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  FitResult r;
  r.points = n;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = ly[i] - (r.intercept + r.slope * lx[i]);
    rss += e * e;
  }
  r.stderr_slope = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  return r;
}

std::vector<double> bound_curve(Family f, FitPredictor predictor,
                                const std::vector<double>& values, double n,
                                double L, double sigma_or_B, double Delta,
                                double eps, bool compensate_log) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    const double nn = predictor == FitPredictor::N ? v : n;
    const double ee = predictor == FitPredictor::Eps ? v : eps;
    double b = analytic_lower_bound(f, nn, L, sigma_or_B, Delta, ee);
    if (f == Family::SC && compensate_log)
      b /= sc_log_factor(nn, L, sigma_or_B, Delta, ee);
    out.push_back(b);
  }
  return out;
}

} // namespace hardsum
