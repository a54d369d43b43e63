#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "weinstein/ensemble.hpp"
#include "weinstein/errors.hpp"
#include "weinstein/field.hpp"
#include "weinstein/grid.hpp"
#include "weinstein/transform.hpp"
#include "weinstein/translation.hpp"

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

GaussianMixture mixture(std::uint64_t seed, int d, const MixtureRanges& ranges = {}) {
  std::mt19937_64 rng(seed);
  return GaussianMixture::random(rng, d, ranges);
}

std::vector<double> random_point(oracle::Rng& rng, int d, double axial, double radial) {
  std::vector<double> x(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i < d; ++i) x[i] = rng.uniform(-axial, axial);
  x[d] = rng.uniform(0.0, radial);
  return x;
}

oracle::ld a_alpha(oracle::ld a) {
  return 2.0L * oracle::gamma(a + 1.0L) / (std::sqrt(std::numbers::pi_v<oracle::ld>) * oracle::gamma(a + 0.5L));
}

// T_x f(y) by tanh-sinh quadrature of the defining angular average.
cdouble translate_oracle(double a, int d, const std::function<cdouble(std::span<const double>)>& f,
                         const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> z(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i < d; ++i) z[i] = x[i] + y[i];
  const auto part = [&](bool imag) {
    return oracle::gegenbauer_integral(
        [&](oracle::ld u) {
          const oracle::ld r2 = static_cast<oracle::ld>(x[d]) * x[d] + static_cast<oracle::ld>(y[d]) * y[d] +
                                2.0L * x[d] * y[d] * u;
          z[d] = static_cast<double>(std::sqrt(std::max(r2, 0.0L)));
          const cdouble v = f(z);
          return static_cast<oracle::ld>(imag ? v.imag() : v.real());
        },
        a);
  };
  const oracle::ld scale = a_alpha(a) / 2.0L;
  return {static_cast<double>(scale * part(false)), static_cast<double>(scale * part(true))};
}

}  // namespace

TEST_CASE("translation rule: a_alpha, normalization and even moments") {
  for (double a : {0.0, 0.25, 0.5, 1.5, 3.0}) {
    const TranslationRule rule{BesselOrder(a)};
    INFO("alpha=" << a);
    CHECK(std::abs(rule.a_alpha() - static_cast<double>(a_alpha(a))) <= 1e-14 * rule.a_alpha());
    CHECK(std::abs(rule.average([](double) { return 1.0; }) - 1.0) <= 1e-14);
    for (double w : rule.weights()) CHECK(w > 0.0);
    for (std::size_t i = 0; i < rule.cos_nodes().size(); ++i) {
      CHECK(std::abs(std::cos(rule.theta_nodes()[i]) - rule.cos_nodes()[i]) <= 1e-14);
    }
    for (int k = 1; k <= 20; ++k) {
      const double got = rule.average([k](double u) { return std::pow(u, 2 * k); });
      const double ref = static_cast<double>(a_alpha(a) / 2.0L * oracle::gegenbauer_moment(a, k));
      CHECK(std::abs(got - ref) <= 1e-13 * ref);
      CHECK(std::abs(rule.average([k](double u) { return std::pow(u, 2 * k - 1); })) <= 1e-14);
    }
  }
}

TEST_CASE("translation rule agrees with tanh-sinh on a smooth non-polynomial integrand") {
  for (double a : {0.0, 0.5, 1.5}) {
    const TranslationRule rule{BesselOrder(a)};
    const auto h = [](double u) { return std::exp(-std::sqrt(2.0 + u)); };
    const double ref = static_cast<double>(
        a_alpha(a) / 2.0L * oracle::gegenbauer_integral([](oracle::ld u) { return std::exp(-std::sqrt(2.0L + u)); }, a));
    CHECK(std::abs(rule.average(h) - ref) <= 1e-13);
  }
}

TEST_CASE("translated_radius") {
  CHECK(translated_radius(3.0, 4.0, 0.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(translated_radius(3.0, 4.0, 1.0) == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(translated_radius(3.0, 3.0, -1.0) == 0.0);
}

TEST_CASE("translate_at matches the angular-average oracle") {
  oracle::Rng rng(17);
  for (double a : {0.0, 0.5, 1.5}) {
    const auto p = WeinsteinParams::make(a, 1);
    const TranslationRule rule{BesselOrder(a)};
    const auto mix = mixture(31, 1);
    const auto f = [&mix](std::span<const double> z) { return mix(z); };
    for (int k = 0; k < 20; ++k) {
      const auto x = random_point(rng, 1, 2.0, 2.0), y = random_point(rng, 1, 2.0, 2.0);
      const cdouble ref = translate_oracle(a, 1, f, x, y);
      CHECK(std::abs(translate_at(rule, p, f, x, y) - ref) <= 1e-12);
    }
  }
}

TEST_CASE("product formula T_x psi(., lambda)(y) = psi(x, lambda) psi(y, lambda)") {
  oracle::Rng rng(4);
  for (double a : {0.0, 0.5, 1.5}) {
    for (int d : {1, 2}) {
      const auto p = WeinsteinParams::make(a, d);
      const TranslationRule rule{BesselOrder(a)};
      for (int k = 0; k < 50; ++k) {
        const auto x = random_point(rng, d, 2.0, 3.0), y = random_point(rng, d, 2.0, 3.0),
                   lam = random_point(rng, d, 2.0, 3.0);
        const auto psi = [&](std::span<const double> z) { return eigenfunction(p, z, lam); };
        CHECK(std::abs(translate_at(rule, p, psi, x, y) - psi(x) * psi(y)) <= 1e-7);
      }
    }
  }
}

TEST_CASE("property: T_x f(y) = T_y f(x) and T_x 1 = 1") {
  oracle::Rng rng(8);
  const auto p = WeinsteinParams::make(0.5, 2);
  const TranslationRule rule{BesselOrder(0.5)};
  const auto mix = mixture(2, 2);
  const auto f = [&mix](std::span<const double> z) { return mix(z); };
  const auto one = [](std::span<const double>) { return cdouble(1.0, 0.0); };
  for (int k = 0; k < 100; ++k) {
    const auto x = random_point(rng, 2, 3.0, 3.0), y = random_point(rng, 2, 3.0, 3.0);
    CHECK(std::abs(translate_at(rule, p, f, x, y) - translate_at(rule, p, f, y, x)) <= 1e-14);
    CHECK(std::abs(translate_at(rule, p, one, x, y) - 1.0) <= 1e-14);
  }
}

TEST_CASE("translate(f, 0) reproduces f") {
  const auto g = make(0.5, 1, 64, 10.0, 32, 8.0);
  const Field f = mixture(1, 1).sample(g);
  CHECK(rel_err(translate(f, std::vector<double>{0.0, 0.0}), f) <= 1e-10);
}

TEST_CASE("grid translate matches translate_at of the analytic function") {
  const auto g = make(0.5, 1, 64, 10.0, 32, 8.0);
  const TranslationRule rule{BesselOrder(0.5)};
  const auto mix = mixture(6, 1);
  const Field f = mix.sample(g);
  const std::vector<double> x{0.7, 0.9};
  const Field Tf = translate(f, x, rule);
  const Field ref = Field::sample(g, [&](std::span<const double> y) {
    return translate_at(rule, g->params(), [&mix](std::span<const double> z) { return mix(z); }, x, y);
  });
  CHECK(rel_err(Tf, ref) <= 1e-8);
}

TEST_CASE("transform of a translate is the conjugate eigenfunction times the transform") {
  oracle::Rng rng(12);
  for (double a : {0.0, 0.5, 1.5}) {
    const auto g = make(a, 1, 64, 10.0, 32, 8.0);
    const TranslationRule rule{BesselOrder(a)};
    const Field f = mixture(40, 1).sample(g);
    const Field F = forward(f);
    std::vector<double> lam(2);
    for (int k = 0; k < 5; ++k) {
      const auto x = random_point(rng, 1, 1.5, 1.2);
      Field rhs = F;
      for (std::size_t i = 0; i < rhs.size(); ++i) {
        g->frequency_point(i, lam);
        rhs[i] *= std::conj(eigenfunction(g->params(), x, lam));
      }
      INFO("alpha=" << a);
      CHECK(rel_err(forward(translate(f, x, rule)), rhs) <= 1e-6);
    }
  }
}

TEST_CASE("property: translation contracts L^p for p in {1, 2, inf}") {
  oracle::Rng rng(13);
  const auto g = make(0.5, 1, 64, 10.0, 32, 8.0);
  const TranslationRule rule{BesselOrder(0.5)};
  for (int k = 0; k < 8; ++k) {
    const Field f = mixture(50 + static_cast<std::uint64_t>(k), 1).sample(g);
    const auto x = random_point(rng, 1, 1.5, 1.5);
    const Field Tf = translate(f, x, rule);
    for (double p : {1.0, 2.0, kInf}) {
      INFO("p=" << p);
      CHECK(lp_norm(Tf, p) <= lp_norm(f, p) * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("convolution: fast route matches direct quadrature, commutes, satisfies Young") {
  const auto small = make(0.5, 1, 16, 5.0, 16, 6.0);
  const TranslationRule rule{BesselOrder(0.5)};
  const MixtureRanges tight{3, 1.0, 2.0, 0.5, 0.5};
  const Field a = mixture(7, 1, tight).sample(small), b = mixture(8, 1, tight).sample(small);
  set_warning_handler([](const std::string&) {});  // the 16x16 box is deliberately tight
  CHECK(rel_err(convolve(a, b), convolve_direct(a, b, rule)) <= 1e-6);
  set_warning_handler(nullptr);

  const auto g = make(0.5, 1, 64, 10.0, 32, 8.0);
  struct Triple {
    double p, q, r;
  };
  const Triple triples[] = {{1.0, 2.0, 2.0}, {2.0, 2.0, kInf}, {1.0, 1.0, 1.0}};
  for (std::uint64_t k = 0; k < 6; ++k) {
    const Field f = mixture(300 + k, 1).sample(g), h = mixture(400 + k, 1).sample(g);
    const Field fh = convolve(f, h);
    CHECK(rel_err(fh, convolve(h, f)) <= 1e-10);
    for (const Triple& t : triples) {
      INFO("k=" << k << " p=" << t.p << " q=" << t.q << " r=" << t.r);
      CHECK(lp_norm(fh, t.r) <= lp_norm(f, t.p) * lp_norm(h, t.q) * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("errors: negative radial shift, grid mismatch, wrong space") {
  const auto g = make(0.5, 1, 16, 5.0, 16, 6.0);
  const auto h = make(0.5, 1, 32, 5.0, 16, 6.0);
  set_warning_handler([](const std::string&) {});
  const Field f = mixture(1, 1).sample(g);
  CHECK_THROWS_AS(translate(f, std::vector<double>{0.0, -0.1}), DomainError);
  CHECK_THROWS_AS(convolve(f, mixture(1, 1).sample(h)), UsageError);
  CHECK_THROWS_AS(translate(forward(f), std::vector<double>{0.0, 0.1}), UsageError);
  set_warning_handler(nullptr);
}
