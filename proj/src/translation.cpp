#include "weinstein/translation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "transform_plan.hpp"
#include "weinstein/errors.hpp"
#include "weinstein/transform.hpp"

namespace weinstein {

TranslationRule::TranslationRule(BesselOrder order, int nodes) : alpha_(order.value()) {
  if (nodes < 1) throw ConfigError("TranslationRule: need at least one node");
  const double b = alpha_ - 0.5;  // Jacobi exponent on both ends
  // Symmetric Jacobi matrix: zero diagonal, off-diagonal sqrt(beta_n) with
  //   beta_n = n (n + 2b) / ((2n + 2b + 1)(2n + 2b - 1)).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(nodes);
  Eigen::VectorXd sub(std::max(nodes - 1, 0));
  for (int n = 1; n < nodes; ++n) {
    // n = 1 simplified so that b = -1/2 (Chebyshev) is not 0/0.
    const double beta = n == 1 ? 1.0 / (2.0 * b + 3.0)
                               : n * (n + 2.0 * b) / ((2.0 * n + 2.0 * b + 1.0) * (2.0 * n + 2.0 * b - 1.0));
    sub(n - 1) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  // Total mass of (1 - u^2)^b on (-1, 1): B(1/2, b + 1).
  const double mu0 = std::exp(std::lgamma(0.5) + std::lgamma(b + 1.0) - std::lgamma(b + 1.5));
  cos_nodes_.resize(static_cast<std::size_t>(nodes));
  theta_nodes_.resize(static_cast<std::size_t>(nodes));
  weights_.resize(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) {
    const double u = std::clamp(eig.eigenvalues()(i), -1.0, 1.0);
    cos_nodes_[i] = u;
    theta_nodes_[i] = std::acos(u);
    const double v0 = eig.eigenvectors()(0, i);
    weights_[i] = mu0 * v0 * v0;
  }
  a_alpha_ = 2.0 * std::exp(std::lgamma(alpha_ + 1.0) - std::lgamma(alpha_ + 0.5)) / std::sqrt(std::numbers::pi);
}

double translated_radius(double x, double y, double u) noexcept {
  return std::sqrt(std::max(0.0, x * x + y * y + 2.0 * x * y * u));
}

cdouble translate_at(const TranslationRule& rule, const WeinsteinParams& params,
                     const std::function<cdouble(std::span<const double>)>& f, std::span<const double> x,
                     std::span<const double> y) {
  const int d = params.d;
  if (x[d] < 0.0 || y[d] < 0.0) throw DomainError("translate_at: last coordinate must be >= 0");
  std::vector<double> z(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i < d; ++i) z[i] = x[i] + y[i];
  return rule.average([&](double u) {
    z[d] = translated_radius(x[d], y[d], u);
    return f(z);
  });
}

namespace {

// (k, m) -> (a/2) sum_i w_i j_a(lambda_m rho_i(x_r, r_k)) W_m, rho_i <= R.
Eigen::MatrixXd translation_matrix(const Grid& g, const TranslationRule& rule, double xr) {
  const int n = g.radial_n();
  const BesselOrder order(g.params().alpha);
  const auto nodes = g.radial_nodes();
  const auto lam = g.radial_freqs();
  const auto wf = g.radial_freq_weights();
  const auto u = rule.cos_nodes();
  const auto w = rule.weights();
  const double r_max = g.radial_extent();
  Eigen::MatrixXd k_mat = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double rho = translated_radius(xr, nodes[k], u[i]);
      if (rho > r_max) continue;
      const double c = 0.5 * rule.a_alpha() * w[i];
      for (int m = 0; m < n; ++m) k_mat(k, m) += c * normalized_bessel_j(order, lam[m] * rho) * wf[m];
    }
  }
  return k_mat;
}

void check_rule(const Grid& g, const TranslationRule& rule) {
  if (rule.alpha() != g.params().alpha) throw UsageError("translation rule order does not match the grid");
}

}  // namespace

Field translate(const Field& f, std::span<const double> x, const TranslationRule& rule) {
  f.require_space(Space::Physical, "translate");
  const Grid& g = f.grid();
  check_rule(g, rule);
  const int d = g.dim();
  if (!(x[d] >= 0.0)) throw DomainError("translate: last coordinate of x must be >= 0");
  const auto& plan = g.transform_plan();

  Field out = f;
  plan.apply_radial(out.values(), plan.radial_forward);

  bool shifted = false;
  for (int i = 0; i < d; ++i) shifted = shifted || x[i] != 0.0;
  if (shifted) {
    plan.apply_axial(out.values(), true);
    const auto n_rad = static_cast<std::size_t>(g.radial_n());
    std::vector<double> xi(static_cast<std::size_t>(d) + 1);
    for (std::size_t a = 0; a < g.axial_count(); ++a) {
      g.frequency_point(a * n_rad, xi);
      double phase = 0.0;
      for (int i = 0; i < d; ++i) phase += xi[i] * x[i];
      const cdouble rot = std::polar(1.0, phase);
      for (std::size_t k = 0; k < n_rad; ++k) out[a * n_rad + k] *= rot;
    }
    plan.apply_axial(out.values(), false);
  }

  plan.apply_radial(out.values(), translation_matrix(g, rule, x[d]));
  return out;
}

Field translate(const Field& f, std::span<const double> x) {
  return translate(f, x, TranslationRule(BesselOrder(f.grid().params().alpha)));
}

Field convolve(const Field& f, const Field& g) {
  f.require_space(Space::Physical, "convolve");
  f.require_compatible(g, "convolve");
  Field fh = forward(f);
  const Field gh = forward(g);
  for (std::size_t i = 0; i < fh.size(); ++i) fh[i] *= gh[i];
  return inverse(fh);
}

Field convolve_direct(const Field& f, const Field& g, const TranslationRule& rule) {
  f.require_space(Space::Physical, "convolve_direct");
  f.require_compatible(g, "convolve_direct");
  const Grid& grid = f.grid();
  check_rule(grid, rule);
  const auto& plan = grid.transform_plan();
  const int d = grid.dim();
  const int n_ax = grid.axial_n();
  const auto n_rad = static_cast<std::size_t>(grid.radial_n());
  const std::size_t rows = grid.axial_count();

  // Per-dimension axial indices of every row.
  std::vector<int> multi(rows * static_cast<std::size_t>(std::max(d, 1)));
  for (std::size_t a = 0; a < rows; ++a) {
    grid.axial_indices(a, std::span<int>(multi.data() + a * static_cast<std::size_t>(std::max(d, 1)),
                                         static_cast<std::size_t>(std::max(d, 1))));
  }
  // Flat index of the node at axial coordinate x' - y' (periodic).
  auto difference_row = [&](std::size_t ax, std::size_t ay) {
    std::size_t flat = 0;
    for (int i = 0; i < d; ++i) {
      const int ix = multi[ax * static_cast<std::size_t>(d) + i];
      const int iy = multi[ay * static_cast<std::size_t>(d) + i];
      const int idx = ((ix - iy + n_ax / 2) % n_ax + n_ax) % n_ax;
      flat = flat * static_cast<std::size_t>(n_ax) + static_cast<std::size_t>(idx);
    }
    return flat;
  };

  std::vector<cdouble> spectral(f.values().begin(), f.values().end());
  plan.apply_radial(spectral, plan.radial_forward);

  std::vector<cdouble> gw(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) gw[i] = g[i] * grid.weight(i);

  Field out(f.grid_ptr(), Space::Physical);
  const auto nodes = grid.radial_nodes();
  std::vector<cdouble> translated(f.size());
  std::vector<cdouble> terms(rows * n_rad);
  for (std::size_t j = 0; j < n_rad; ++j) {
    // translated(y', k) = T_{(0, r_j)} f (y', r_k)
    std::copy(spectral.begin(), spectral.end(), translated.begin());
    plan.apply_radial(translated, translation_matrix(grid, rule, nodes[j]));
    for (std::size_t ax = 0; ax < rows; ++ax) {
      for (std::size_t ay = 0; ay < rows; ++ay) {
        const std::size_t src = difference_row(ax, ay) * n_rad;
        for (std::size_t k = 0; k < n_rad; ++k) terms[ay * n_rad + k] = translated[src + k] * gw[ay * n_rad + k];
      }
      out[ax * n_rad + j] = pairwise_sum(terms);
    }
  }
  return out;
}

}  // namespace weinstein
