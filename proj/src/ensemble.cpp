#include "weinstein/ensemble.hpp"

#include <cmath>
#include <numbers>

namespace weinstein {

GaussianMixture GaussianMixture::random(std::mt19937_64& rng, int d, const MixtureRanges& ranges) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<GaussianTerm> terms;
  for (int k = 0; k < ranges.terms; ++k) {
    GaussianTerm t;
    const double mag = 0.5 + unit(rng);
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    t.amplitude = std::polar(mag, phase);
    t.width = ranges.width_min + (ranges.width_max - ranges.width_min) * unit(rng);
    t.center.resize(static_cast<std::size_t>(d));
    for (double& c : t.center) c = ranges.center_spread * (2.0 * unit(rng) - 1.0);
    t.radial_poly = ranges.radial_poly_max * unit(rng);
    terms.push_back(std::move(t));
  }
  return GaussianMixture(std::move(terms));
}

cdouble GaussianMixture::operator()(std::span<const double> x) const {
  const std::size_t d = x.size() - 1;
  const double r2 = x[d] * x[d];
  cdouble acc{};
  for (const GaussianTerm& t : terms_) {
    double q = r2;
    for (std::size_t i = 0; i < d; ++i) q += (x[i] - t.center[i]) * (x[i] - t.center[i]);
    acc += t.amplitude * (1.0 + t.radial_poly * r2) * std::exp(-t.width * q);
  }
  return acc;
}

Field GaussianMixture::sample(const GridPtr& grid) const {
  return Field::sample(grid, [this](std::span<const double> x) { return (*this)(x); });
}

std::uint64_t member_seed(std::uint64_t master, std::uint64_t index) noexcept {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace weinstein
