#include "transform_plan.hpp"

#include <algorithm>
#include <mutex>

#include "weinstein/special_fn.hpp"

namespace weinstein::detail {

namespace {

// The FFTW planner is not reentrant; execution on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr std::size_t kRowBlock = 2048;

}  // namespace

TransformPlan::TransformPlan(const Grid& grid)
    : rows_(grid.axial_count()), radial_n_(grid.radial_n()), d_(grid.dim()) {
  const int n_rad = grid.radial_n();
  const BesselOrder order(grid.params().alpha);
  const auto zeros = grid.bessel_zeros();
  const double s_last = zeros[static_cast<std::size_t>(n_rad)];
  const auto w = grid.radial_weights();
  const auto wf = grid.radial_freq_weights();

  radial_forward.resize(n_rad, n_rad);
  radial_inverse.resize(n_rad, n_rad);
  for (int m = 0; m < n_rad; ++m) {
    for (int k = m; k < n_rad; ++k) {
      // lambda_m r_k = j_m j_k / S, symmetric in (m, k).
      const double kernel = normalized_bessel_j(order, zeros[m] * zeros[k] / s_last);
      radial_forward(m, k) = kernel * w[k];
      radial_forward(k, m) = kernel * w[m];
      radial_inverse(k, m) = kernel * wf[m];
      radial_inverse(m, k) = kernel * wf[k];
    }
  }

  if (d_ > 0) {
    const int n = grid.axial_n();
    std::vector<int> dims(static_cast<std::size_t>(d_), n);
    axial_sign_.resize(rows_);
    std::vector<int> idx(static_cast<std::size_t>(d_));
    for (std::size_t a = 0; a < rows_; ++a) {
      grid.axial_indices(a, idx);
      int parity = 0;
      for (int v : idx) parity += v;
      axial_sign_[a] = (parity % 2 == 0) ? 1.0 : -1.0;
    }
    forward_scale_ = grid.axial_weight();
    inverse_scale_ = grid.axial_freq_weight();

    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_complex* scratch = fftw_alloc_complex(grid.size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fft_forward_ = fftw_plan_many_dft(d_, dims.data(), n_rad, scratch, nullptr, n_rad, 1, scratch, nullptr, n_rad,
                                      1, FFTW_FORWARD, flags);
    fft_backward_ = fftw_plan_many_dft(d_, dims.data(), n_rad, scratch, nullptr, n_rad, 1, scratch, nullptr,
                                       n_rad, 1, FFTW_BACKWARD, flags);
    fftw_free(scratch);
  }
}

TransformPlan::~TransformPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fft_forward_) fftw_destroy_plan(fft_forward_);
  if (fft_backward_) fftw_destroy_plan(fft_backward_);
}

void TransformPlan::apply_radial(std::span<std::complex<double>> data, const Eigen::MatrixXd& matrix) const {
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const int n = radial_n_;
  for (std::size_t r0 = 0; r0 < rows_; r0 += kRowBlock) {
    const auto nr = static_cast<Eigen::Index>(std::min(kRowBlock, rows_ - r0));
    RowMat re(nr, n), im(nr, n);
    std::complex<double>* block = data.data() + r0 * static_cast<std::size_t>(n);
    for (Eigen::Index r = 0; r < nr; ++r) {
      for (int k = 0; k < n; ++k) {
        re(r, k) = block[r * n + k].real();
        im(r, k) = block[r * n + k].imag();
      }
    }
    const RowMat out_re = re * matrix.transpose();
    const RowMat out_im = im * matrix.transpose();
    for (Eigen::Index r = 0; r < nr; ++r) {
      for (int k = 0; k < n; ++k) block[r * n + k] = {out_re(r, k), out_im(r, k)};
    }
  }
}

void TransformPlan::apply_axial(std::span<std::complex<double>> data, bool forward) const {
  if (d_ == 0) return;
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  const auto n = static_cast<std::size_t>(radial_n_);
  if (forward) {
    fftw_execute_dft(fft_forward_, ptr, ptr);
    for (std::size_t a = 0; a < rows_; ++a) {
      const double s = axial_sign_[a] * forward_scale_;
      for (std::size_t k = 0; k < n; ++k) data[a * n + k] *= s;
    }
  } else {
    for (std::size_t a = 0; a < rows_; ++a) {
      const double s = axial_sign_[a] * inverse_scale_;
      for (std::size_t k = 0; k < n; ++k) data[a * n + k] *= s;
    }
    fftw_execute_dft(fft_backward_, ptr, ptr);
  }
}

}  // namespace weinstein::detail
