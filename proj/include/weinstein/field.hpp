#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "weinstein/grid.hpp"

namespace weinstein {

using cdouble = std::complex<double>;

enum class Space { Physical, Frequency };

const char* to_string(Space space) noexcept;

/// Complex samples on the nodes of a Grid, tagged with the space they live in.
class Field {
 public:
  Field(GridPtr grid, Space space);
  Field(GridPtr grid, Space space, std::vector<cdouble> values);

  /// Samples f at the physical nodes (space == Physical) or at the frequency
  /// nodes (space == Frequency). The span passed to f holds d + 1 coordinates.
  static Field sample(GridPtr grid, const std::function<cdouble(std::span<const double>)>& f,
                      Space space = Space::Physical);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  Space space() const noexcept { return space_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const cdouble> values() const noexcept { return values_; }
  std::span<cdouble> values() noexcept { return values_; }
  cdouble operator[](std::size_t i) const noexcept { return values_[i]; }
  cdouble& operator[](std::size_t i) noexcept { return values_[i]; }

  /// Throws UsageError unless the field lives in `expected`.
  void require_space(Space expected, const char* op) const;
  /// Throws UsageError unless both fields share grid and space.
  void require_compatible(const Field& other, const char* op) const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(cdouble scalar);

 private:
  GridPtr grid_;
  Space space_;
  std::vector<cdouble> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cdouble scalar, Field a);

/// Quadrature approximation of the integral of f against mu_{alpha,d}.
/// Physical-space fields only.
cdouble integrate(const Field& f);

/// Weighted L^p norm (p in [1, inf]); p = inf is the max over nodes. Uses the
/// quadrature of whichever space the field lives in.
double lp_norm(const Field& f, double p);

/// <f, g> = integral of f conj(g) d mu.
cdouble inner_product(const Field& f, const Field& g);

/// Largest |f| on the outer boundary layer (axial index 0 in any axial
/// dimension, or last radial node) relative to the sup norm.
double boundary_magnitude(const Field& f);

/// Sum of the weighted |f|^2 over nodes with some axial |x_i| >= frac * L or
/// radial coordinate >= frac * R, divided by the total.
double boundary_mass_fraction(const Field& f, double frac = 0.9);

/// Deterministic pairwise summation.
double pairwise_sum(std::span<const double> v);
cdouble pairwise_sum(std::span<const cdouble> v);

}  // namespace weinstein
