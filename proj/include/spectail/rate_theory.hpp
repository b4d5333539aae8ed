#pragma once
// Upper-tail rate function of the top eigenvalue of a sparse Gaussian network
// and the lower-tail exponent.
//
//   phi(delta, k) = k(k-3)/2 + ((1+delta)/2) * k/(k-1),   k >= 2
//   psi(delta)    = min_k phi(delta, k)
//
// psi is continuous and piecewise linear in delta; on [delta_{k-1}, delta_k]
// it equals phi(., k), with delta_k = 2k(k-1)^2 - 1 and delta_1 = 0.

#include <vector>

namespace spectail::rate {

struct RateProfile {
  double delta = 0.0;
  double psi = 0.0;
  std::vector<int> minimizers;  // one element, or two consecutive integers
  int h = 2;                    // smallest minimizer
  double x_star = 0.0;          // root of d/dx phi(delta, x) on x > 1
};

struct TransitionLadder {
  std::vector<double> points;  // points[k-1] = delta_k; points[0] = 0
  int k_max = 2;
};

double phi(double delta, int k);

/// Derivative of phi in its (real) clique-size argument.
double phi_prime(double delta, double x);

/// Bracket (lo, hi) that always contains x_star.
std::pair<double, double> x_star_bracket(double delta);

double x_star(double delta);

RateProfile psi(double delta);

/// delta_k in closed form; delta_1 is pinned to 0.
double transition_point(int k);

TransitionLadder transition_points(int k_max);

/// delta/2 + (3/2^{5/3}) delta^{2/3}; large-delta reference curve only.
double psi_asymptotic(double delta);

/// Largest |psi - psi_asymptotic| / delta^{1/3} over a log grid of `samples`
/// points in [lo, hi].
double calibrate_asymptotic_constant(double lo, double hi, int samples);

/// Double-logarithmic lower-tail exponent; equals delta on (0, 1).
double lower_tail_exponent(double delta);

}  // namespace spectail::rate
