#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "weinstein/ensemble.hpp"
#include "weinstein/errors.hpp"
#include "weinstein/field.hpp"
#include "weinstein/grid.hpp"
#include "weinstein/propagator.hpp"
#include "weinstein/strichartz.hpp"
#include "weinstein/transform.hpp"

using namespace weinstein;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GridPtr make(double alpha, int d, int n, double L, int nr, double R) {
  return Grid::build(WeinsteinParams::make(alpha, d), n, L, nr, R);
}

double rel_err(const Field& a, const Field& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / den;
}

Field gaussian(const GridPtr& g, double s) {
  return Field::sample(g, [s](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return cdouble(std::exp(-s * r2), 0.0);
  });
}

// (1 + 4ist)^{-sigma} exp(-s|x|^2 / (1 + 4ist)), written out independently.
Field gaussian_exact(const GridPtr& g, double s, double t) {
  const double sigma = g->params().alpha + g->params().d / 2.0 + 1.0;
  const cdouble z(1.0, 4.0 * s * t);
  return Field::sample(g, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return std::pow(z, -sigma) * std::exp(-s * r2 / z);
  });
}

Field mixture_field(const GridPtr& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return GaussianMixture::random(rng, g->params().d, MixtureRanges{}).sample(g);
}

}  // namespace

TEST_CASE("I(0) is the identity") {
  const auto g = make(0.5, 1, 64, 16.0, 64, 16.0);
  const Field f = mixture_field(g, 1);
  CHECK(rel_err(free_evolve(f, 0.0), f) <= 1e-10);
}

TEST_CASE("free evolution of a Gaussian matches the closed form") {
  for (double a : {0.0, 0.5, 1.5}) {
    for (int d : {1, 2}) {
      const auto g = d == 1 ? make(a, 1, 256, 40.0, 128, 40.0) : make(a, 2, 128, 20.0, 64, 20.0);
      const PropagatorPlan plan(g);
      const Field e = gaussian(g, 1.0);
      for (double t : {0.1, 0.5, 1.0, 2.0}) {
        if (d == 2 && t > 1.0) continue;  // the 20-wide box no longer holds the spread Gaussian
        INFO("alpha=" << a << " d=" << d << " t=" << t);
        CHECK(rel_err(plan.free_evolve(e, t), gaussian_exact(g, 1.0, t)) <= 1e-6);
        const double sigma = g->params().sigma;
        CHECK(gaussian_evolved_sup(g->params(), 1.0, t) ==
              doctest::Approx(std::pow(1.0 + 16.0 * t * t, -sigma / 2.0)).epsilon(1e-14));
        const std::vector<double> x{0.3, 0.4, 0.5};
        const std::span<const double> xs(x.data(), static_cast<std::size_t>(d) + 1);
        double r2 = 0.0;
        for (double v : xs) r2 += v * v;
        const cdouble z(1.0, 4.0 * t);
        CHECK(std::abs(gaussian_evolved(g->params(), 1.0, t, xs) - std::pow(z, -sigma) * std::exp(-r2 / z)) <= 1e-15);
      }
    }
  }
}

TEST_CASE("property: unitarity, group law and time reversal") {
  oracle::Rng rng(23);
  const auto g = make(0.5, 1, 256, 40.0, 128, 40.0);
  const PropagatorPlan plan(g);
  for (int k = 0; k < 10; ++k) {
    const Field f = mixture_field(g, 10 + static_cast<std::uint64_t>(k));
    const double t = rng.uniform(-2.0, 2.0), s = rng.uniform(-2.0, 2.0);
    const Field ft = plan.free_evolve(f, t);
    CHECK(std::abs(lp_norm(ft, 2.0) / lp_norm(f, 2.0) - 1.0) <= 1e-10);
    CHECK(rel_err(plan.free_evolve(ft, s), plan.free_evolve(f, t + s)) <= 1e-9);
    CHECK(rel_err(plan.free_evolve(ft, -t), f) <= 1e-9);
  }
}

TEST_CASE("cumulative weights integrate low-degree polynomials exactly") {
  const double dt = 0.37;
  for (int k = 1; k <= 12; ++k) {
    const auto w = cumulative_weights(k, dt);
    const int degree = k == 1 ? 2 : 3;
    for (int m = 0; m <= degree; ++m) {
      double sum = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) sum += w[j] * std::pow(static_cast<double>(j) * dt, m);
      const double exact = std::pow(k * dt, m + 1) / (m + 1);
      INFO("k=" << k << " m=" << m);
      CHECK(std::abs(sum - exact) <= 1e-13 * std::max(1.0, exact));
    }
  }
}

TEST_CASE("Duhamel: zero forcing, I(s) h forcing, sample count") {
  const auto g = make(0.5, 1, 128, 20.0, 64, 20.0);
  const PropagatorPlan plan(g);
  const double T = 1.0;
  const int n = 33;
  std::vector<Field> zero(n, Field(g, Space::Physical));
  for (cdouble v : duhamel(plan, zero, T).values()) CHECK(v == cdouble(0.0, 0.0));

  const Field h = gaussian(g, 1.0);
  std::vector<Field> forcing;
  for (int j = 0; j < n; ++j) forcing.push_back(plan.free_evolve(h, j * T / (n - 1)));
  Field expect = plan.free_evolve(h, T);
  expect *= T;
  CHECK(rel_err(duhamel(plan, forcing, T), expect) <= 1e-9);

  const auto traj = duhamel_trajectory(plan, forcing, T / (n - 1));
  REQUIRE(traj.size() == static_cast<std::size_t>(n));
  for (int k = 1; k < n; k += 7) {
    const double t = k * T / (n - 1);
    Field e = plan.free_evolve(h, t);
    e *= t;
    CHECK(rel_err(traj[k], e) <= 1e-9);
  }

  std::vector<Field> two(2, h);
  CHECK_THROWS_AS(duhamel(plan, two, T), UsageError);
}

TEST_CASE("decay exponent and log-log fit") {
  const auto p = WeinsteinParams::make(0.5, 1);
  CHECK(decay_exponent(p, 2.0) == 0.0);
  CHECK(decay_exponent(p, kInf) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(decay_exponent(p, 4.0) == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<double> t{1.0, 2.0, 4.0, 8.0};
  std::vector<double> y;
  for (double v : t) y.push_back(3.0 * std::pow(v, -1.5));
  const auto fit = fit_loglog(t, y);
  CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-13));
  CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("decay_fit: L^2 norm is flat, sup norm decays like t^{-sigma}") {
  const auto g = make(0.0, 1, 512, 80.0, 256, 80.0);
  const auto flat = decay_fit(g, 1.0, 1.0, 5.0, 2.0, 8);
  CHECK(std::abs(flat.fit.slope) <= 0.01);
  const auto sup = decay_fit(g, 1.0, 1.0, 5.0, kInf, 8);
  CHECK(sup.expected_slope == -1.5);
  CHECK(std::abs(sup.fit.slope + 1.5) <= 0.04 * 1.5);
  CHECK(sup.normalized_constant <= 1.0 + 1e-6);
  CHECK(sup.boundary_mass <= kBoundaryMassLimit);
}

TEST_CASE("decay_fit aborts once mass reaches the box edge") {
  const auto g = make(0.5, 1, 64, 8.0, 32, 8.0);
  set_warning_handler([](const std::string&) {});
  CHECK_THROWS_AS(decay_fit(g, 1.0, 1.0, 30.0, kInf, 6), GridTooSmall);
  set_warning_handler(nullptr);
}

TEST_CASE("Hardy-Littlewood-Sobolev constant estimate is finite and positive") {
  const auto g = make(0.5, 1, 64, 20.0, 64, 20.0);
  ForcingOptions opts;
  opts.T = 1.0;
  opts.samples = 17;
  opts.ensemble_size = 3;
  // 1/2 + 1/2 = 4 (1/2 - 1/4).
  const auto est = hls_constant(g, 2.0, 2.0, 4.0, opts);
  CHECK(std::isfinite(est.max));
  CHECK(est.max > 0.0);
  CHECK(est.members.size() == 3u);
  CHECK_THROWS_AS(hls_constant(g, 2.0, 4.0 / 3.0, 4.0, opts), DomainError);
}
