#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "weinstein/field.hpp"

namespace weinstein {

/// c (1 + b x_{d+1}^2) exp(-s (|x' - x0'|^2 + x_{d+1}^2)), even and entire in x_{d+1}.
struct GaussianTerm {
  cdouble amplitude{1.0, 0.0};
  double width = 1.0;
  std::vector<double> center;
  double radial_poly = 0.0;
};

struct MixtureRanges {
  int terms = 3;
  double width_min = 0.5;
  double width_max = 1.0;
  /// Axial centers uniform in [-center_spread, center_spread]^d.
  double center_spread = 1.0;
  double radial_poly_max = 0.5;
};

/// Analytic random test function; sampling it on any grid gives the same member.
class GaussianMixture {
 public:
  GaussianMixture() = default;
  explicit GaussianMixture(std::vector<GaussianTerm> terms) : terms_(std::move(terms)) {}

  static GaussianMixture random(std::mt19937_64& rng, int d, const MixtureRanges& ranges);

  cdouble operator()(std::span<const double> x) const;
  Field sample(const GridPtr& grid) const;
  const std::vector<GaussianTerm>& terms() const noexcept { return terms_; }

 private:
  std::vector<GaussianTerm> terms_;
};

/// splitmix64 finalizer of (master, index): per-member seeds independent of
/// evaluation order.
std::uint64_t member_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace weinstein
