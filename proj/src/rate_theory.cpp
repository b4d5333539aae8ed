#include "spectail/rate_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectail/errors.hpp"

namespace spectail::rate {

namespace {

void require_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw DomainError("delta must be a positive finite number, got " + std::to_string(delta));
  }
}

constexpr double kTieRel = 1e-12;
constexpr double kBisectTol = 1e-12;

}  // namespace

double phi(double delta, int k) {
  require_delta(delta);
  if (k < 2) throw DomainError("phi requires clique size k >= 2, got " + std::to_string(k));
  const double kd = k;
  return kd * (kd - 3.0) / 2.0 + (1.0 + delta) / 2.0 * kd / (kd - 1.0);
}

double phi_prime(double delta, double x) {
  const double xm1 = x - 1.0;
  return x - 1.5 - (1.0 + delta) / (2.0 * xm1 * xm1);
}

std::pair<double, double> x_star_bracket(double delta) {
  const double c = std::cbrt((1.0 + delta) / 2.0);
  return {c + 1.0, c + 1.5};
}

double x_star(double delta) {
  require_delta(delta);
  auto [lo, hi] = x_star_bracket(delta);
  // phi' is increasing on x > 1: negative at lo, positive at hi.
  while (hi - lo > kBisectTol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (phi_prime(delta, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

RateProfile psi(double delta) {
  require_delta(delta);
  RateProfile out;
  out.delta = delta;
  out.x_star = x_star(delta);
  const int k_cap = std::max(static_cast<int>(std::ceil(out.x_star)) + 2, 8);

  double best = std::numeric_limits<double>::infinity();
  for (int k = 2; k <= k_cap; ++k) best = std::min(best, phi(delta, k));
  for (int k = 2; k <= k_cap; ++k) {
    if (std::abs(phi(delta, k) - best) <= kTieRel * std::max(1.0, std::abs(best))) out.minimizers.push_back(k);
  }
  out.psi = best;
  out.h = out.minimizers.front();
  return out;
}

double transition_point(int k) {
  if (k < 1) throw DomainError("transition index must be >= 1");
  if (k == 1) return 0.0;
  const double kd = k;
  return 2.0 * kd * (kd - 1.0) * (kd - 1.0) - 1.0;
}

TransitionLadder transition_points(int k_max) {
  if (k_max < 2) throw DomainError("k_max must be >= 2");
  TransitionLadder ladder;
  ladder.k_max = k_max;
  ladder.points.reserve(k_max);
  for (int k = 1; k <= k_max; ++k) ladder.points.push_back(transition_point(k));
  return ladder;
}

double psi_asymptotic(double delta) {
  require_delta(delta);
  return 0.5 * delta + 3.0 / std::pow(2.0, 5.0 / 3.0) * std::pow(delta, 2.0 / 3.0);
}

double calibrate_asymptotic_constant(double lo, double hi, int samples) {
  if (!(lo > 0.0) || !(hi > lo) || samples < 2) throw DomainError("bad calibration grid");
  double c = 0.0;
  const double step = std::log(hi / lo) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    const double d = lo * std::exp(step * i);
    c = std::max(c, std::abs(psi(d).psi - psi_asymptotic(d)) / std::cbrt(d));
  }
  return c;
}

double lower_tail_exponent(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("lower-tail exponent is defined for delta in (0, 1), got " + std::to_string(delta));
  }
  return delta;
}

}  // namespace spectail::rate
