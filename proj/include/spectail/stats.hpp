#pragma once

#include <span>
#include <utility>

namespace spectail::stats {

/// P(N(0,1) > t).
double normal_tail(double t);

/// log P(N(0,1) > t), accurate far into the tail.
double log_normal_tail(double t);

/// x with log P(N(0,1) > x) = log_q, for log_q <= log(1/2).
double normal_tail_inverse_log(double log_q);

/// P(chi^2_dof >= x).
double chi_square_tail(double dof, double x);

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Exact (Clopper-Pearson) two-sided interval for a binomial proportion.
Interval clopper_pearson(long long hits, long long trials, double confidence = 0.95);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;   // 0 when only two points or an exact fit
  double residual_ss = 0.0;
};

/// Ordinary least squares y = intercept + slope x. Needs >= 2 points.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Two-sided Student t quantile, used for slope confidence intervals.
double student_t_quantile(double confidence, double dof);

double median(std::span<const double> values);

}  // namespace spectail::stats
