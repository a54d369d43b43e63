#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "weinstein/ensemble.hpp"
#include "weinstein/grid.hpp"
#include "weinstein/trajectory.hpp"

namespace weinstein {

enum class Admissibility { Sharp, Nonsharp, Inadmissible };

const char* to_string(Admissibility a) noexcept;

/// Exponents may be +infinity.
struct AdmissiblePair {
  double q = 0.0;
  double r = 0.0;
  Admissibility classification = Admissibility::Inadmissible;
};

/// Absolute tolerance on 1/q + sigma/r - sigma/2 for "equality".
inline constexpr double kAdmissibilityTol = 1e-12;

/// sigma-admissibility: q, r >= 2, (q, r, sigma) != (2, inf, 1) and
/// 1/q + sigma/r <= sigma/2, Sharp on equality. Throws DomainError unless q, r > 0.
AdmissiblePair classify(double sigma, double q, double r);
AdmissiblePair classify(const WeinsteinParams& params, double q, double r);

/// Conjugate exponent; conjugate(1) = inf. Throws DomainError for p < 1.
double conjugate(double p);

/// 4 / (d + 2 alpha + 2) = 2 / sigma.
double critical_power(const WeinsteinParams& params);

/// Space exponent of the sharp pair with time exponent q: 2 sigma q / (sigma q - 2).
/// Throws DomainError when sigma q <= 2.
double sharp_r(double sigma, double q);

/// Endpoint pair exponent r for q = 2: (2d + 4 alpha + 4) / (d + 2 alpha).
double endpoint_r(const WeinsteinParams& params);

struct MixedNormSpec {
  double q = 2.0;
  double r = 2.0;
  double a = 0.0;
  double b = 1.0;
};

/// (integral over [a, b] of y(t)^q dt)^{1/q} for samples y at uniform times, or
/// max over [a, b] for q = inf. a and b must be sample times (relative 1e-9);
/// Simpson (3/8 closing panel on odd counts), trapezoid on a single interval.
double time_norm(std::span<const double> times, std::span<const double> values, double q, double a, double b);

/// ||u||_{L^q([a, b]; L^r_alpha)}. Throws UsageError when [a, b] is not covered.
double mixed_norm(const Trajectory& traj, const MixedNormSpec& spec);

/// Per-sample ||u(t_k)||_{alpha, r}.
std::vector<double> spatial_norms(const Trajectory& traj, double r);

struct QuotientOptions {
  double T = 10.0;
  double dt = 0.25;
  int ensemble_size = 50;
  std::uint64_t seed = 1;
  MixtureRanges ranges{};
  /// Member 0 is the normalized Gaussian exp(-|x|^2) instead of a random mixture.
  bool gaussian_only = false;
  int workers = 1;
};

struct QuotientMember {
  int index = 0;
  /// ||I(.) g||_{L^q([-T, T]; L^r)} / ||g||_2 and the same on [-2T, 2T].
  double quotient_T = 0.0;
  double quotient_2T = 0.0;
};

struct QuotientStats {
  AdmissiblePair pair;
  double sigma = 0.0;
  int ensemble_size = 0;
  double T = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double max_2T = 0.0;
  double boundary_mass = 0.0;
  std::vector<QuotientMember> members;
};

/// Empirical Strichartz quotients for several pairs from one set of evolutions.
/// Throws UsageError for an Inadmissible pair, GridTooSmall when an evolved
/// member leaves the box.
std::vector<QuotientStats> strichartz_quotients(const GridPtr& grid, std::span<const AdmissiblePair> pairs,
                                                const QuotientOptions& options);
QuotientStats strichartz_quotient(const GridPtr& grid, const AdmissiblePair& pair, const QuotientOptions& options);

struct ForcingOptions {
  double T = 2.0;
  /// Time samples on [0, T], at least 3.
  int samples = 65;
  int ensemble_size = 20;
  std::uint64_t seed = 7;
  MixtureRanges ranges{};
};

/// Random forcing F(t, x) = (a + b sin(w t + phi)) h(x) from one member.
struct ForcingMember {
  GaussianMixture data;
  GaussianMixture profile;
  double a = 1.0, b = 0.0, w = 0.0, phi = 0.0;
  double envelope(double t) const;
};

ForcingMember random_forcing(std::uint64_t seed, int d, const MixtureRanges& ranges);

struct ConstantEstimate {
  double max = 0.0;
  double mean = 0.0;
  std::vector<double> members;
};

/// max over members of
///   (||u||_{L^q L^r} + sup_t ||u(t)||_2) / (||g||_2 + ||F||_{L^{q1'} L^{r1'}})
/// on [0, T], with u = I(t) g + Phi(F)(t).
ConstantEstimate inhomogeneous_constant(const GridPtr& grid, const AdmissiblePair& pair,
                                        const AdmissiblePair& forcing_pair, const ForcingOptions& options);

/// max over members of ||Phi(F)||_{L^{q1}([0,T]; L^r)} / ||F||_{L^{r1'}([0,T]; L^{r'})}.
/// Throws DomainError unless 1/q1 + 1/r1 = (d + 2 alpha + 2)(1/2 - 1/r).
ConstantEstimate hls_constant(const GridPtr& grid, double q1, double r1, double r, const ForcingOptions& options);

}  // namespace weinstein
