#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "weinstein/ensemble.hpp"
#include "weinstein/errors.hpp"
#include "weinstein/field.hpp"
#include "weinstein/grid.hpp"
#include "weinstein/transform.hpp"

using namespace weinstein;

namespace {

GridPtr make(double alpha, int d, int n, double L, int nr, double R) {
  return Grid::build(WeinsteinParams::make(alpha, d), n, L, nr, R);
}

Field gaussian(const GridPtr& g, double s) {
  return Field::sample(g, [s](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return cdouble(std::exp(-s * r2), 0.0);
  });
}

double rel_err(const Field& a, const Field& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / den;
}

GaussianMixture mixture(std::uint64_t seed, int d) {
  std::mt19937_64 rng(seed);
  return GaussianMixture::random(rng, d, MixtureRanges{});
}

std::vector<double> random_point(oracle::Rng& rng, int d, double scale) {
  std::vector<double> x(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i < d; ++i) x[i] = rng.uniform(-scale, scale);
  x[d] = rng.uniform(0.0, scale);
  return x;
}

struct SilenceWarnings {
  SilenceWarnings() {
    set_warning_handler([](const std::string&) {});
  }
  ~SilenceWarnings() { set_warning_handler(nullptr); }
};

}  // namespace

TEST_CASE("eigenfunction: value at lambda = 0, symmetry and bound") {
  oracle::Rng rng(21);
  for (int d : {1, 2}) {
    for (double a : {0.0, 0.5, 1.5}) {
      const auto p = WeinsteinParams::make(a, d);
      const std::vector<double> zero(static_cast<std::size_t>(d) + 1, 0.0);
      for (int i = 0; i < 100; ++i) {
        const auto x = random_point(rng, d, 10.0), lam = random_point(rng, d, 10.0);
        CHECK(eigenfunction(p, x, zero) == cdouble(1.0, 0.0));
        CHECK(std::abs(eigenfunction(p, x, lam) - eigenfunction(p, lam, x)) <= 1e-15);
      }
      for (int i = 0; i < 1000; ++i) {
        const auto x = random_point(rng, d, 30.0), lam = random_point(rng, d, 30.0);
        CHECK(std::abs(eigenfunction(p, x, lam)) <= 1.0 + 1e-15);
      }
    }
  }
}

TEST_CASE("forward Gaussian pair at d = 1, alpha = 0.5, s = 1: 0.25 exp(-|lambda|^2 / 4)") {
  const auto g = make(0.5, 1, 64, 8.0, 64, 8.0);
  const Field F = forward(gaussian(g, 1.0));
  const Field exact = Field::sample(
      g,
      [](std::span<const double> l) { return cdouble(0.25 * std::exp(-(l[0] * l[0] + l[1] * l[1]) / 4.0), 0.0); },
      Space::Frequency);
  CHECK(rel_err(F, exact) <= 1e-6);
  CHECK(F.space() == Space::Frequency);
}

TEST_CASE("Gaussian family s in {0.5, 1, 2, 4}") {
  for (double a : {0.0, 0.5, 1.5}) {
    const auto g = make(a, 1, 64, 6.5, 64, 8.0);
    const double sigma = g->params().sigma;
    for (double s : {0.5, 1.0, 2.0, 4.0}) {
      SilenceWarnings quiet;
      const Field exact = Field::sample(
          g,
          [&](std::span<const double> l) {
            return cdouble(std::pow(2.0 * s, -sigma) * std::exp(-(l[0] * l[0] + l[1] * l[1]) / (4.0 * s)), 0.0);
          },
          Space::Frequency);
      INFO("alpha=" << a << " s=" << s);
      CHECK(rel_err(forward(gaussian(g, s)), exact) <= 1e-6);
    }
  }
}

TEST_CASE("forward agrees with the independent mixture oracle") {
  for (double a : {0.0, 0.5, 1.5}) {
    const auto g = make(a, 1, 64, 8.0, 48, 8.0);
    const auto mix = mixture(77 + static_cast<std::uint64_t>(10 * a), 1);
    const Field F = forward(mix.sample(g));
    double num = 0.0, den = 0.0;
    std::vector<double> lam(2);
    // A strided subset of nodes keeps the dense radial quadrature affordable.
    for (std::size_t i = 0; i < F.size(); i += 37) {
      g->frequency_point(i, lam);
      cdouble ref = 0.0;
      for (const auto& t : mix.terms()) ref += oracle::transform_term({t.amplitude, t.width, t.center, t.radial_poly}, a, 1, lam);
      num = std::max(num, std::abs(F[i] - ref));
      den = std::max(den, std::abs(ref));
    }
    INFO("alpha=" << a);
    CHECK(num / den <= 1e-8);
  }
}

TEST_CASE("forward matches direct quadrature on a 16x16 grid") {
  for (double a : {0.0, 0.5, 1.5}) {
    const auto g = make(a, 1, 16, 5.0, 16, 6.0);
    SilenceWarnings quiet;
    const Field f = mixture(5, 1).sample(g);
    CHECK(rel_err(forward(f), direct_forward(f)) <= 1e-8);
  }
}

TEST_CASE("linearity") {
  const auto g = make(0.5, 1, 32, 6.0, 32, 7.0);
  SilenceWarnings quiet;
  const Field f = mixture(1, 1).sample(g), h = mixture(2, 1).sample(g);
  const cdouble a(0.3, -1.2), b(-2.0, 0.5);
  const Field lhs = forward(a * f + b * h);
  const Field rhs = a * forward(f) + b * forward(h);
  CHECK(rel_err(lhs, rhs) <= 1e-12);
}

TEST_CASE("inverse: round trip, zero, Gaussian recovery, space tags") {
  const auto g = make(0.5, 2, 32, 6.5, 32, 8.0);
  const Field f = mixture(3, 2).sample(g);
  CHECK(rel_err(inverse(forward(f)), f) <= 1e-8);
  const Field zero(g, Space::Frequency);
  for (cdouble v : inverse(zero).values()) CHECK(v == cdouble(0.0, 0.0));
  const Field e = gaussian(g, 1.0);
  CHECK(rel_err(inverse(forward(e)), e) <= 1e-8);
  CHECK_THROWS_AS(forward(zero), UsageError);
  CHECK_THROWS_AS(inverse(e), UsageError);
}

TEST_CASE("laplacian symbol reproduces the Weinstein Laplacian of a Gaussian") {
  const auto g = make(0.5, 1, 64, 10.0, 64, 12.0);
  const double a = 0.5;
  const Field F = forward(gaussian(g, 0.5));
  const Field lap = inverse(laplacian_symbol_apply(F));
  const Field exact = Field::sample(g, [a](std::span<const double> x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return cdouble(std::exp(-r2 / 2.0) * (r2 - (1.0 + 2.0 * a + 2.0)), 0.0);
  });
  CHECK(rel_err(lap, exact) <= 1e-6);
  for (cdouble v : laplacian_symbol_apply(Field(g, Space::Frequency)).values()) CHECK(v == cdouble(0.0, 0.0));
  CHECK_THROWS_AS(laplacian_symbol_apply(gaussian(g, 1.0)), UsageError);
  const Field one = Field::sample(g, [](std::span<const double>) { return cdouble(1.0, 0.0); }, Space::Frequency);
  const Field sym = laplacian_symbol_apply(one);
  for (std::size_t i = 0; i < sym.size(); i += 97) CHECK(sym[i].real() == -g->frequency_norm_sq(i));
}

TEST_CASE("property: Plancherel, Parseval and the sup bound across alpha and d") {
  for (double a : {0.0, 0.5, 1.5}) {
    for (int d : {1, 2}) {
      const auto g = d == 1 ? make(a, 1, 64, 6.5, 64, 8.0) : make(a, 2, 32, 6.5, 32, 8.0);
      for (std::uint64_t k = 0; k < 6; ++k) {
        const Field f = mixture(100 + k, d).sample(g), h = mixture(200 + k, d).sample(g);
        const Field Ff = forward(f), Fh = forward(h);
        INFO("alpha=" << a << " d=" << d << " k=" << k);
        CHECK(std::abs(lp_norm(Ff, 2.0) / lp_norm(f, 2.0) - 1.0) <= 1e-8);
        const cdouble ip = inner_product(f, h), ipF = inner_product(Ff, Fh);
        CHECK(std::abs(ip - ipF) <= 1e-8 * lp_norm(f, 2.0) * lp_norm(h, 2.0));
        CHECK(lp_norm(Ff, std::numeric_limits<double>::infinity()) <= lp_norm(f, 1.0) * (1.0 + 1e-8));
        Field pos = f;
        for (cdouble& v : pos.values()) v = std::abs(v);
        CHECK(lp_norm(forward(pos), std::numeric_limits<double>::infinity()) <= lp_norm(pos, 1.0) * (1.0 + 1e-8));
      }
    }
  }
}

TEST_CASE("boundary warning fires above 1e-8 and stays quiet below") {
  int count = 0;
  set_warning_handler([&count](const std::string&) { ++count; });
  const auto g = make(0.5, 1, 32, 3.0, 32, 3.0);
  (void)forward(gaussian(g, 0.5));
  CHECK(count >= 1);
  count = 0;
  (void)forward(gaussian(g, 8.0));
  CHECK(count == 0);
  set_warning_handler(nullptr);
}
