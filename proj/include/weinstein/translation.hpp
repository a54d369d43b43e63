#pragma once

#include <functional>
#include <span>
#include <vector>

#include "weinstein/field.hpp"
#include "weinstein/special_fn.hpp"

namespace weinstein {

/// Gauss-Gegenbauer rule for the theta-integral of the generalized translation.
///
/// With u = cos(theta) the integral of g(theta) sin(theta)^{2 alpha} over (0, pi)
/// becomes an integral against (1 - u^2)^{alpha - 1/2} on (-1, 1); the nodes
/// and weights are those of that Jacobi weight (Golub-Welsch). a_alpha is fixed
/// by T_x 1 = 1, i.e. (a_alpha / 2) * sum(weights) = 1.
class TranslationRule {
 public:
  explicit TranslationRule(BesselOrder order, int nodes = 64);

  double alpha() const noexcept { return alpha_; }
  std::span<const double> cos_nodes() const noexcept { return cos_nodes_; }
  /// theta_i = arccos(u_i), in (0, pi).
  std::span<const double> theta_nodes() const noexcept { return theta_nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  /// 2 Gamma(alpha + 1) / (sqrt(pi) Gamma(alpha + 1/2)).
  double a_alpha() const noexcept { return a_alpha_; }

  /// (a_alpha / 2) * sum_i w_i h(u_i).
  template <typename H>
  auto average(H&& h) const {
    decltype(h(0.0)) acc{};
    for (std::size_t i = 0; i < weights_.size(); ++i) acc += weights_[i] * h(cos_nodes_[i]);
    return 0.5 * a_alpha_ * acc;
  }

 private:
  double alpha_;
  double a_alpha_;
  std::vector<double> cos_nodes_;
  std::vector<double> theta_nodes_;
  std::vector<double> weights_;
};

/// sqrt(x^2 + y^2 + 2 x y u): the radius averaged over by the translation.
double translated_radius(double x, double y, double u) noexcept;

/// T_x f(y) for an analytically given f (d + 1 coordinates in, value out).
cdouble translate_at(const TranslationRule& rule, const WeinsteinParams& params,
                     const std::function<cdouble(std::span<const double>)>& f, std::span<const double> x,
                     std::span<const double> y);

/// T_x f on the grid of f. The axial shift x' + y' is spectral (periodic wrap on
/// the box); off-grid radii are evaluated through the Fourier-Bessel expansion
/// of f and radii beyond R contribute zero. Throws DomainError if x_{d+1} < 0.
Field translate(const Field& f, std::span<const double> x, const TranslationRule& rule);
Field translate(const Field& f, std::span<const double> x);

/// Weinstein convolution via the transform: inverse(forward(f) * forward(g)).
Field convolve(const Field& f, const Field& g);

/// Weinstein convolution by direct quadrature,
///   (f * g)(x) = integral of T_x f(-y', y_{d+1}) g(y) d mu(y),
/// the form whose transform is forward(f) * forward(g). O(size^2): small grids only.
Field convolve_direct(const Field& f, const Field& g, const TranslationRule& rule);

}  // namespace weinstein
