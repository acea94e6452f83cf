#pragma once

#include <cstddef>
#include <vector>

#include "circreg/rng.hpp"

namespace circreg {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct QuadraticFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;  // y = c0 + c1 x + c2 x^2
  double c2_stderr = 0.0;
};
QuadraticFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased
double median(std::vector<double> v);

// Wilson score interval; `n` may be an effective (non-integer) count.
Interval wilson_interval(double proportion, double n, double z = 1.959963984540054);

// Standard error of the mean from `blocks` contiguous block means
// (jackknife over blocks, which for a mean equals the block-means formula).
double block_jackknife_stderr(const std::vector<double>& series, std::size_t blocks);

// Geyer initial-positive-sequence estimate of the integrated autocorrelation.
double integrated_autocorrelation(const std::vector<double>& series);
double effective_sample_size(const std::vector<double>& series);

// Potential scale reduction factor over equally long chains.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

Interval bootstrap_median_interval(const std::vector<double>& values, Rng& rng, std::size_t reps = 2000,
                                   double level = 0.95);

}  // namespace circreg
