#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace weinstein {

/// The pair (alpha, d) and the quantities derived from it.
struct WeinsteinParams {
  double alpha = 0.0;
  int d = 1;
  /// (d + 2 alpha + 2) / 2, the dispersion exponent.
  double sigma = 0.0;
  /// ((2 pi)^{d/2} 2^alpha Gamma(alpha+1))^{-1}, the density constant of mu_{alpha,d}.
  double measure_const = 0.0;

  /// Validates alpha > -1/2 and d >= 0 (d = 0 is the pure radial case).
  static WeinsteinParams make(double alpha, int d);

  /// alpha + d/2 + 1; equal to sigma, named after its role as the Gaussian exponent.
  double gaussian_exponent() const noexcept { return sigma; }
};

namespace detail {
struct TransformPlan;
}

/// Tensor discretization of R^d x (0, inf): a periodic box [-L, L)^d sampled
/// uniformly in the first d variables and the quasi-discrete Hankel grid of
/// order alpha (scaled Bessel zeros) in the last one. Immutable once built.
///
/// Node layout is row-major over the axial indices with the radial index fastest:
///   index = ((i_1 * n + i_2) * n + ... + i_d) * N + k.
class Grid {
 public:
  static std::shared_ptr<const Grid> build(const WeinsteinParams& params, int axial_n, double half_width,
                                           int radial_n, double radial_extent);

  const WeinsteinParams& params() const noexcept { return params_; }
  int dim() const noexcept { return params_.d; }
  int axial_n() const noexcept { return axial_n_; }
  double half_width() const noexcept { return half_width_; }
  int radial_n() const noexcept { return radial_n_; }
  double radial_extent() const noexcept { return radial_extent_; }

  /// axial_n^d.
  std::size_t axial_count() const noexcept { return axial_count_; }
  /// axial_n^d * radial_n.
  std::size_t size() const noexcept { return axial_count_ * static_cast<std::size_t>(radial_n_); }

  double axial_spacing() const noexcept { return axial_spacing_; }
  double axial_freq_spacing() const noexcept { return axial_freq_spacing_; }
  /// x_j = -L + j dx, j = 0..n-1.
  std::span<const double> axial_nodes() const noexcept { return axial_nodes_; }
  /// Discrete dual frequencies in FFT order: k pi / L for k < n/2, (k - n) pi / L otherwise.
  std::span<const double> axial_freqs() const noexcept { return axial_freqs_; }

  /// x_{d+1,k} = j_{alpha,k} R / j_{alpha,N+1}.
  std::span<const double> radial_nodes() const noexcept { return radial_nodes_; }
  /// lambda_{d+1,m} = j_{alpha,m} / R.
  std::span<const double> radial_freqs() const noexcept { return radial_freqs_; }
  /// Radial quadrature weights, including the radial part of the measure constant.
  std::span<const double> radial_weights() const noexcept { return radial_weights_; }
  std::span<const double> radial_freq_weights() const noexcept { return radial_freq_weights_; }
  /// Positive zeros j_{alpha,1..N+1} of J_alpha.
  std::span<const double> bessel_zeros() const noexcept { return zeros_; }

  /// Product of the per-axis axial weights (dx / sqrt(2 pi))^d.
  double axial_weight() const noexcept { return axial_weight_; }
  double axial_freq_weight() const noexcept { return axial_freq_weight_; }

  /// Full quadrature weight of a physical node / frequency node.
  double weight(std::size_t index) const noexcept;
  double freq_weight(std::size_t index) const noexcept;

  /// Coordinates of a physical node; `out` must hold d + 1 values.
  void point(std::size_t index, std::span<double> out) const;
  /// Coordinates of a frequency node; `out` must hold d + 1 values.
  void frequency_point(std::size_t index, std::span<double> out) const;

  /// |lambda|^2 at a frequency node.
  double frequency_norm_sq(std::size_t index) const noexcept;

  /// Splits an axial flat index into per-dimension indices.
  void axial_indices(std::size_t axial_index, std::span<int> out) const;

  bool same_as(const Grid& other) const noexcept;

  /// Per-grid transform plan (FFT plans, Hankel matrices), built on first use.
  const detail::TransformPlan& transform_plan() const;

  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;
  ~Grid();

 private:
  Grid() = default;

  WeinsteinParams params_;
  int axial_n_ = 1;
  double half_width_ = 0.0;
  int radial_n_ = 0;
  double radial_extent_ = 0.0;
  std::size_t axial_count_ = 1;
  double axial_spacing_ = 0.0;
  double axial_freq_spacing_ = 0.0;
  double axial_weight_ = 1.0;
  double axial_freq_weight_ = 1.0;
  std::vector<double> axial_nodes_;
  std::vector<double> axial_freqs_;
  std::vector<double> zeros_;
  std::vector<double> radial_nodes_;
  std::vector<double> radial_freqs_;
  std::vector<double> radial_weights_;
  std::vector<double> radial_freq_weights_;

  mutable std::once_flag plan_once_;
  mutable std::unique_ptr<detail::TransformPlan> plan_;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace weinstein
