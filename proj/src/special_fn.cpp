#include "weinstein/special_fn.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "weinstein/errors.hpp"

namespace weinstein {

namespace {

// |xi| up to which the power series is summed directly. At |xi| = 8 the largest
// term is O(50) for the orders of interest, which keeps cancellation below 1e-14.
constexpr double kSeriesCrossoverSq = 64.0;

double series_j(double alpha, double xi_sq) {
  const double q = -0.25 * xi_sq;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 200; ++n) {
    term *= q / (n * (n + alpha));
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum) && n * n > 0.25 * xi_sq) break;
  }
  return sum;
}

double bessel_j_derivative(double alpha, double x) {
  return (alpha / x) * boost::math::cyl_bessel_j(alpha, x) - boost::math::cyl_bessel_j(alpha + 1.0, x);
}

// McMahon's large-zero expansion.
double mcmahon_guess(double alpha, int k) {
  const double mu = 4.0 * alpha * alpha;
  const double beta = (k + 0.5 * alpha - 0.25) * std::numbers::pi;
  const double b8 = 8.0 * beta;
  return beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * std::pow(b8, 3)) -
         32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * std::pow(b8, 5));
}

// Uniform expansion of the first zero for larger orders.
double first_zero_large_order(double alpha) {
  const double c = std::cbrt(alpha);
  return alpha + 1.8557571 * c + 1.033150 / c - 0.00397 / alpha - 0.0908 / (c * c * alpha) +
         0.043 / (c * alpha * alpha);
}

double newton_zero(double alpha, double x) {
  for (int it = 0; it < 60; ++it) {
    const double f = boost::math::cyl_bessel_j(alpha, x);
    const double df = bessel_j_derivative(alpha, x);
    double step = f / df;
    // Keep the iterate near its start so it cannot hop to a neighbouring zero.
    step = std::clamp(step, -1.0, 1.0);
    x -= step;
    if (std::abs(step) <= 4e-16 * x) break;
  }
  return x;
}

// Sign-change bracket search followed by bisection; used when Newton lands on
// the wrong zero.
double bracketed_zero(double alpha, double lo) {
  const double h = 0.125;
  double a = lo;
  double fa = boost::math::cyl_bessel_j(alpha, a);
  double b = a + h;
  double fb = boost::math::cyl_bessel_j(alpha, b);
  while ((fa > 0) == (fb > 0)) {
    a = b;
    fa = fb;
    b += h;
    fb = boost::math::cyl_bessel_j(alpha, b);
  }
  for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = boost::math::cyl_bessel_j(alpha, m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return newton_zero(alpha, 0.5 * (a + b));
}

}  // namespace

BesselOrder::BesselOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > -0.5) || !std::isfinite(alpha)) {
    throw DomainError("Bessel order must satisfy alpha > -1/2, got " + std::to_string(alpha));
  }
}

double gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("gamma: argument must be positive and finite");
  }
  return std::tgamma(x);
}

double normalized_bessel_j(BesselOrder order, double xi) {
  if (!std::isfinite(xi)) throw DomainError("normalized_bessel_j: non-finite argument");
  const double alpha = order.value();
  const double xi_sq = xi * xi;
  if (xi_sq <= kSeriesCrossoverSq) return series_j(alpha, xi_sq);
  const double x = std::sqrt(xi_sq);
  const double log_scale = std::lgamma(alpha + 1.0) + alpha * std::log(2.0 / x);
  return std::exp(log_scale) * boost::math::cyl_bessel_j(alpha, x);
}

double bessel_j(BesselOrder order, double x) {
  if (!std::isfinite(x) || x < 0.0) throw DomainError("bessel_j: argument must be finite and >= 0");
  return boost::math::cyl_bessel_j(order.value(), x);
}

std::vector<double> bessel_zeros(BesselOrder order, int count) {
  if (count < 0) throw DomainError("bessel_zeros: negative count");
  const double alpha = order.value();
  std::vector<double> zeros;
  zeros.reserve(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) {
    double guess;
    if (alpha <= 2.5) {
      guess = mcmahon_guess(alpha, k);
    } else if (k == 1) {
      guess = first_zero_large_order(alpha);
    } else if (k == 2) {
      guess = zeros[0] + std::max(std::numbers::pi, zeros[0] - alpha);
    } else {
      guess = std::max(mcmahon_guess(alpha, k), 2.0 * zeros[k - 2] - zeros[k - 3]);
    }
    double z = newton_zero(alpha, guess);
    const double prev = k == 1 ? 0.0 : zeros.back();
    // Consecutive zeros are at least ~2.4 apart for every admissible order and
    // the first zero exceeds alpha; anything else means Newton wandered.
    const bool bad = !std::isfinite(z) || z <= prev + 1.0 || (k == 1 && z < alpha) ||
                     std::abs(boost::math::cyl_bessel_j(alpha, z)) > 1e-8;
    if (bad) z = bracketed_zero(alpha, prev + 1.0);
    zeros.push_back(z);
  }
  return zeros;
}

double bessel_zero(BesselOrder order, int k) {
  if (k < 1) throw DomainError("bessel_zero: index must be >= 1");
  return bessel_zeros(order, k).back();
}

}  // namespace weinstein
