#pragma once

#include <functional>
#include <span>
#include <string>

#include "weinstein/field.hpp"
#include "weinstein/grid.hpp"

namespace weinstein {

/// Psi(x, lambda) = exp(-i <x', lambda'>) j_alpha(lambda_{d+1} x_{d+1}).
/// Both points carry d + 1 coordinates.
cdouble eigenfunction(const WeinsteinParams& params, std::span<const double> x, std::span<const double> lambda);

/// Discrete Weinstein transform: quadrature of f against Psi(., lambda) at the
/// dual grid nodes. Axial factor by FFT, radial factor by the quasi-discrete
/// Hankel matrix of order alpha.
Field forward(const Field& f);

/// Inverse transform (reflected kernel on the axial factor; the radial factor
/// is self-dual).
Field inverse(const Field& spectrum);

/// Pointwise multiplication by -|lambda|^2, the symbol of the Weinstein operator.
Field laplacian_symbol_apply(const Field& spectrum);

/// Slow path: the quadrature sum of f(x) Psi(x, lambda) over all physical
/// nodes, at an arbitrary lambda.
cdouble direct_forward_at(const Field& f, std::span<const double> lambda);

/// Slow path evaluated at every frequency node (O(size^2)).
Field direct_forward(const Field& f);

/// Relative boundary magnitude above which forward() reports a warning.
inline constexpr double kBoundaryWarnThreshold = 1e-8;

/// Receives runtime warnings (default: stderr). Pass an empty function to mute.
void set_warning_handler(std::function<void(const std::string&)> handler);
void emit_warning(const std::string& message);

}  // namespace weinstein
