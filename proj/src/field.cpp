#include "weinstein/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "weinstein/errors.hpp"

namespace weinstein {

const char* to_string(Space space) noexcept { return space == Space::Physical ? "physical" : "frequency"; }

Field::Field(GridPtr grid, Space space) : grid_(std::move(grid)), space_(space) {
  if (!grid_) throw UsageError("Field: null grid");
  values_.assign(grid_->size(), cdouble{0.0, 0.0});
}

Field::Field(GridPtr grid, Space space, std::vector<cdouble> values)
    : grid_(std::move(grid)), space_(space), values_(std::move(values)) {
  if (!grid_) throw UsageError("Field: null grid");
  if (values_.size() != grid_->size()) {
    throw UsageError("Field: " + std::to_string(values_.size()) + " values for a grid of " +
                     std::to_string(grid_->size()) + " nodes");
  }
}

Field Field::sample(GridPtr grid, const std::function<cdouble(std::span<const double>)>& f, Space space) {
  Field out(grid, space);
  std::vector<double> x(static_cast<std::size_t>(grid->dim()) + 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (space == Space::Physical) {
      grid->point(i, x);
    } else {
      grid->frequency_point(i, x);
    }
    out.values_[i] = f(x);
  }
  return out;
}

void Field::require_space(Space expected, const char* op) const {
  if (space_ != expected) {
    throw UsageError(std::string(op) + ": expected a " + to_string(expected) + "-space field, got " +
                     to_string(space_));
  }
}

void Field::require_compatible(const Field& other, const char* op) const {
  if (!grid_->same_as(*other.grid_)) throw UsageError(std::string(op) + ": fields live on different grids");
  if (space_ != other.space_) throw UsageError(std::string(op) + ": fields live in different spaces");
}

Field& Field::operator+=(const Field& other) {
  require_compatible(other, "operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_compatible(other, "operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(cdouble scalar) {
  for (auto& v : values_) v *= scalar;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cdouble scalar, Field a) { return a *= scalar; }

namespace {

template <typename T>
T pairwise_impl(const T* v, std::size_t n) {
  if (n <= 16) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_impl(v, half) + pairwise_impl(v + half, n - half);
}

double node_weight(const Field& f, std::size_t i) {
  return f.space() == Space::Physical ? f.grid().weight(i) : f.grid().freq_weight(i);
}

}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise_impl(v.data(), v.size()); }
cdouble pairwise_sum(std::span<const cdouble> v) { return pairwise_impl(v.data(), v.size()); }

cdouble integrate(const Field& f) {
  f.require_space(Space::Physical, "integrate");
  std::vector<cdouble> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) terms[i] = f[i] * f.grid().weight(i);
  return pairwise_sum(terms);
}

double lp_norm(const Field& f, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : f.values()) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> terms(f.size());
  if (p == 2.0) {
    for (std::size_t i = 0; i < f.size(); ++i) terms[i] = std::norm(f[i]) * node_weight(f, i);
    return std::sqrt(pairwise_sum(terms));
  }
  for (std::size_t i = 0; i < f.size(); ++i) terms[i] = std::pow(std::abs(f[i]), p) * node_weight(f, i);
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

cdouble inner_product(const Field& f, const Field& g) {
  f.require_compatible(g, "inner_product");
  std::vector<cdouble> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) terms[i] = f[i] * std::conj(g[i]) * node_weight(f, i);
  return pairwise_sum(terms);
}

double boundary_magnitude(const Field& f) {
  const Grid& g = f.grid();
  const auto n_rad = static_cast<std::size_t>(g.radial_n());
  std::vector<int> idx(static_cast<std::size_t>(std::max(g.dim(), 1)));
  double sup = 0.0;
  double edge = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double m = std::abs(f[i]);
    sup = std::max(sup, m);
    bool on_edge = (i % n_rad) == n_rad - 1;
    if (!on_edge && g.dim() > 0) {
      g.axial_indices(i / n_rad, idx);
      on_edge = std::any_of(idx.begin(), idx.begin() + g.dim(), [](int v) { return v == 0; });
    }
    if (on_edge) edge = std::max(edge, m);
  }
  return sup > 0.0 ? edge / sup : 0.0;
}

double boundary_mass_fraction(const Field& f, double frac) {
  f.require_space(Space::Physical, "boundary_mass_fraction");
  const Grid& g = f.grid();
  std::vector<double> x(static_cast<std::size_t>(g.dim()) + 1);
  std::vector<double> all(f.size());
  std::vector<double> edge(f.size(), 0.0);
  const double l_cut = frac * g.half_width();
  const double r_cut = frac * g.radial_extent();
  for (std::size_t i = 0; i < f.size(); ++i) {
    g.point(i, x);
    const double m = std::norm(f[i]) * g.weight(i);
    all[i] = m;
    bool outer = x[g.dim()] >= r_cut;
    for (int a = 0; a < g.dim() && !outer; ++a) outer = std::abs(x[a]) >= l_cut;
    if (outer) edge[i] = m;
  }
  const double total = pairwise_sum(all);
  return total > 0.0 ? pairwise_sum(edge) / total : 0.0;
}

}  // namespace weinstein
