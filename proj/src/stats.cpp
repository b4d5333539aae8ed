#include "spectail/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "spectail/errors.hpp"

namespace spectail::stats {

double normal_tail(double t) { return 0.5 * std::erfc(t / M_SQRT2); }

double log_normal_tail(double t) {
  if (t < 30.0) return std::log(normal_tail(t));
  // Asymptotic Mills-ratio series; relative error below 1e-12 for t >= 30.
  const double t2 = t * t;
  const double series = 1.0 - 1.0 / t2 + 3.0 / (t2 * t2) - 15.0 / (t2 * t2 * t2) + 105.0 / (t2 * t2 * t2 * t2);
  return -0.5 * t2 - std::log(t) - 0.5 * std::log(2.0 * M_PI) + std::log(series);
}

double normal_tail_inverse_log(double log_q) {
  if (!(log_q <= std::log(0.5))) throw DomainError("normal_tail_inverse_log needs q <= 1/2");
  if (log_q > -600.0) {
    // erfc_inv handles q down to the smallest subnormal.
    return M_SQRT2 * boost::math::erfc_inv(2.0 * std::exp(log_q));
  }
  // Newton on log P(N > x) = log_q; d/dx log P = -phi(x)/P(N > x).
  double x = std::sqrt(-2.0 * log_q);
  for (int it = 0; it < 50; ++it) {
    const double f = log_normal_tail(x) - log_q;
    const double log_phi = -0.5 * x * x - 0.5 * std::log(2.0 * M_PI);
    const double deriv = -std::exp(log_phi - log_normal_tail(x));
    const double step = f / deriv;
    x -= step;
    if (std::abs(step) < 1e-14 * x) break;
  }
  return x;
}

double chi_square_tail(double dof, double x) {
  if (!(dof > 0.0)) throw DomainError("chi-square degrees of freedom must be positive");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

Interval clopper_pearson(long long hits, long long trials, double confidence) {
  if (trials <= 0 || hits < 0 || hits > trials) throw DomainError("clopper_pearson: need 0 <= hits <= trials, trials > 0");
  const double alpha = 1.0 - confidence;
  Interval iv;
  const double x = static_cast<double>(hits);
  const double n = static_cast<double>(trials);
  iv.low = hits == 0 ? 0.0 : boost::math::ibeta_inv(x, n - x + 1.0, alpha / 2.0);
  iv.high = hits == trials ? 1.0 : boost::math::ibeta_inv(x + 1.0, n - x, 1.0 - alpha / 2.0);
  return iv;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least_squares needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("least_squares: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    fit.residual_ss += r * r;
  }
  if (x.size() > 2) fit.slope_se = std::sqrt(fit.residual_ss / (n - 2.0) / sxx);
  return fit;
}

double student_t_quantile(double confidence, double dof) {
  boost::math::students_t dist(dof);
  return boost::math::quantile(dist, 0.5 + confidence / 2.0);
}

double median(std::span<const double> values) {
  if (values.empty()) throw DomainError("median of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace spectail::stats
