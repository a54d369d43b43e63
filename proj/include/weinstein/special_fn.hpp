#pragma once

#include <vector>

namespace weinstein {

/// Index of a Bessel function. Only alpha > -1/2 is representable.
class BesselOrder {
 public:
  explicit BesselOrder(double alpha);

  double value() const noexcept { return alpha_; }

 private:
  double alpha_;
};

/// Gamma function on (0, inf). Throws DomainError for x <= 0.
double gamma(double x);

/// Normalized Bessel function
///   j_a(xi) = Gamma(a+1) * sum_n (-1)^n / (n! Gamma(n+a+1)) (xi/2)^{2n},
/// an even entire function with j_a(0) = 1 and |j_a(xi)| <= 1 on the real line.
/// Evaluated through xi^2 so that j_a(xi) and j_a(-xi) are bit-identical.
double normalized_bessel_j(BesselOrder order, double xi);

/// Classical Bessel function of the first kind J_a(x) for x >= 0.
double bessel_j(BesselOrder order, double x);

/// k-th positive zero of J_a (k >= 1).
double bessel_zero(BesselOrder order, int k);

/// The first `count` positive zeros of J_a, in increasing order.
std::vector<double> bessel_zeros(BesselOrder order, int count);

}  // namespace weinstein
