#include "weinstein/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "transform_plan.hpp"
#include "weinstein/errors.hpp"
#include "weinstein/special_fn.hpp"

namespace weinstein {

WeinsteinParams WeinsteinParams::make(double alpha, int d) {
  if (!(alpha > -0.5) || !std::isfinite(alpha)) {
    throw ConfigError("alpha must satisfy alpha > -1/2 (got " + std::to_string(alpha) + ")");
  }
  if (d < 0) throw ConfigError("d must be >= 0 (got " + std::to_string(d) + ")");
  WeinsteinParams p;
  p.alpha = alpha;
  p.d = d;
  p.sigma = (d + 2.0 * alpha + 2.0) / 2.0;
  p.measure_const =
      1.0 / (std::pow(2.0 * std::numbers::pi, 0.5 * d) * std::pow(2.0, alpha) * std::tgamma(alpha + 1.0));
  return p;
}

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::~Grid() = default;

std::shared_ptr<const Grid> Grid::build(const WeinsteinParams& params, int axial_n, double half_width,
                                        int radial_n, double radial_extent) {
  if (params.d == 0) {
    if (axial_n != 1) throw ConfigError("axial_n must be 1 when d = 0");
  } else if (!is_power_of_two(axial_n) || axial_n < 8) {
    throw ConfigError("axial_n must be a power of two >= 8 (got " + std::to_string(axial_n) + ")");
  }
  if (radial_n < 16) throw ConfigError("radial_n must be >= 16 (got " + std::to_string(radial_n) + ")");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw ConfigError("axial half-width L must be > 0");
  if (!(radial_extent > 0.0) || !std::isfinite(radial_extent)) throw ConfigError("radial extent R must be > 0");

  std::shared_ptr<Grid> g(new Grid());
  g->params_ = params;
  g->axial_n_ = axial_n;
  g->half_width_ = half_width;
  g->radial_n_ = radial_n;
  g->radial_extent_ = radial_extent;

  g->axial_count_ = 1;
  for (int i = 0; i < params.d; ++i) g->axial_count_ *= static_cast<std::size_t>(axial_n);

  const double sqrt_2pi = std::sqrt(2.0 * std::numbers::pi);
  if (params.d > 0) {
    g->axial_spacing_ = 2.0 * half_width / axial_n;
    g->axial_freq_spacing_ = std::numbers::pi / half_width;
    g->axial_nodes_.resize(static_cast<std::size_t>(axial_n));
    g->axial_freqs_.resize(static_cast<std::size_t>(axial_n));
    for (int j = 0; j < axial_n; ++j) {
      g->axial_nodes_[j] = -half_width + j * g->axial_spacing_;
      const int signed_k = j < axial_n / 2 ? j : j - axial_n;
      g->axial_freqs_[j] = signed_k * g->axial_freq_spacing_;
    }
    g->axial_weight_ = std::pow(g->axial_spacing_ / sqrt_2pi, params.d);
    g->axial_freq_weight_ = std::pow(g->axial_freq_spacing_ / sqrt_2pi, params.d);
  }

  // Quasi-discrete Hankel grid. With S = j_{N+1} and tau = S / R the weights
  //   w_k = 2 r_k^{2a} / (tau^2 J_{a+1}(j_k)^2)
  // integrate r^{2a+1} f(r) dr exactly for even entire f of exponential type 2 tau.
  const BesselOrder order(params.alpha);
  const double alpha = params.alpha;
  g->zeros_ = weinstein::bessel_zeros(order, radial_n + 1);
  const double s_last = g->zeros_.back();
  const double radial_const = 1.0 / (std::pow(2.0, alpha) * std::tgamma(alpha + 1.0));
  const double tau = s_last / radial_extent;  // radial band limit
  const BesselOrder next(alpha + 1.0);
  g->radial_nodes_.resize(static_cast<std::size_t>(radial_n));
  g->radial_freqs_.resize(static_cast<std::size_t>(radial_n));
  g->radial_weights_.resize(static_cast<std::size_t>(radial_n));
  g->radial_freq_weights_.resize(static_cast<std::size_t>(radial_n));
  for (int k = 0; k < radial_n; ++k) {
    const double jk = g->zeros_[k];
    const double jnext = bessel_j(next, jk);
    const double r = jk / tau;
    const double lam = jk / radial_extent;
    g->radial_nodes_[k] = r;
    g->radial_freqs_[k] = lam;
    g->radial_weights_[k] = radial_const * 2.0 * std::pow(r, 2.0 * alpha) / (tau * tau * jnext * jnext);
    // Dual grid: band limit R, nodes j_k / R.
    g->radial_freq_weights_[k] =
        radial_const * 2.0 * std::pow(lam, 2.0 * alpha) / (radial_extent * radial_extent * jnext * jnext);
  }
  return g;
}

double Grid::weight(std::size_t index) const noexcept {
  return axial_weight_ * radial_weights_[index % static_cast<std::size_t>(radial_n_)];
}

double Grid::freq_weight(std::size_t index) const noexcept {
  return axial_freq_weight_ * radial_freq_weights_[index % static_cast<std::size_t>(radial_n_)];
}

void Grid::axial_indices(std::size_t axial_index, std::span<int> out) const {
  for (int i = params_.d - 1; i >= 0; --i) {
    out[i] = static_cast<int>(axial_index % static_cast<std::size_t>(axial_n_));
    axial_index /= static_cast<std::size_t>(axial_n_);
  }
}

void Grid::point(std::size_t index, std::span<double> out) const {
  const auto n_rad = static_cast<std::size_t>(radial_n_);
  std::size_t a = index / n_rad;
  for (int i = params_.d - 1; i >= 0; --i) {
    out[i] = axial_nodes_[a % static_cast<std::size_t>(axial_n_)];
    a /= static_cast<std::size_t>(axial_n_);
  }
  out[params_.d] = radial_nodes_[index % n_rad];
}

void Grid::frequency_point(std::size_t index, std::span<double> out) const {
  const auto n_rad = static_cast<std::size_t>(radial_n_);
  std::size_t a = index / n_rad;
  for (int i = params_.d - 1; i >= 0; --i) {
    out[i] = axial_freqs_[a % static_cast<std::size_t>(axial_n_)];
    a /= static_cast<std::size_t>(axial_n_);
  }
  out[params_.d] = radial_freqs_[index % n_rad];
}

double Grid::frequency_norm_sq(std::size_t index) const noexcept {
  const auto n_rad = static_cast<std::size_t>(radial_n_);
  std::size_t a = index / n_rad;
  const double lam = radial_freqs_[index % n_rad];
  double s = lam * lam;
  for (int i = 0; i < params_.d; ++i) {
    const double xi = axial_freqs_[a % static_cast<std::size_t>(axial_n_)];
    s += xi * xi;
    a /= static_cast<std::size_t>(axial_n_);
  }
  return s;
}

bool Grid::same_as(const Grid& other) const noexcept {
  return this == &other ||
         (params_.alpha == other.params_.alpha && params_.d == other.params_.d && axial_n_ == other.axial_n_ &&
          half_width_ == other.half_width_ && radial_n_ == other.radial_n_ &&
          radial_extent_ == other.radial_extent_);
}

const detail::TransformPlan& Grid::transform_plan() const {
  std::call_once(plan_once_, [this] { plan_ = std::make_unique<detail::TransformPlan>(*this); });
  return *plan_;
}

}  // namespace weinstein
