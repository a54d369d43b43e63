#pragma once

#include <fftw3.h>

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "weinstein/grid.hpp"

namespace weinstein::detail {

/// Precomputed pieces of the discrete transform for one Grid. Read-only after
/// construction; concurrent use from several threads is safe.
struct TransformPlan {
  explicit TransformPlan(const Grid& grid);
  ~TransformPlan();
  TransformPlan(const TransformPlan&) = delete;
  TransformPlan& operator=(const TransformPlan&) = delete;

  /// (m, k) -> j_a(lambda_m r_k) w_k.
  Eigen::MatrixXd radial_forward;
  /// (k, m) -> j_a(lambda_m r_k) W_m.
  Eigen::MatrixXd radial_inverse;

  /// data[row * N + k] <- sum_k' matrix(k, k') data[row * N + k'].
  void apply_radial(std::span<std::complex<double>> data, const Eigen::MatrixXd& matrix) const;
  /// Weighted DFT over the axial indices, including the (-1)^k phase that
  /// accounts for the box starting at -L.
  void apply_axial(std::span<std::complex<double>> data, bool forward) const;

 private:
  std::size_t rows_ = 1;
  int radial_n_ = 0;
  int d_ = 0;
  fftw_plan fft_forward_ = nullptr;
  fftw_plan fft_backward_ = nullptr;
  std::vector<double> axial_sign_;
  double forward_scale_ = 1.0;
  double inverse_scale_ = 1.0;
};

}  // namespace weinstein::detail
