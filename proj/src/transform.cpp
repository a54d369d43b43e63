#include "weinstein/transform.hpp"

#include <cmath>
#include <iostream>
#include <mutex>

#include "transform_plan.hpp"
#include "weinstein/errors.hpp"
#include "weinstein/field_io.hpp"
#include "weinstein/special_fn.hpp"

namespace weinstein {

namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

std::function<void(const std::string&)>& handler() {
  static std::function<void(const std::string&)> h = [](const std::string& msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return h;
}

}  // namespace

void set_warning_handler(std::function<void(const std::string&)> h) {
  std::lock_guard<std::mutex> lock(handler_mutex());
  handler() = std::move(h);
}

void emit_warning(const std::string& message) {
  std::lock_guard<std::mutex> lock(handler_mutex());
  if (handler()) handler()(message);
}

cdouble eigenfunction(const WeinsteinParams& params, std::span<const double> x, std::span<const double> lambda) {
  double phase = 0.0;
  for (int i = 0; i < params.d; ++i) phase += x[i] * lambda[i];
  const double radial = normalized_bessel_j(BesselOrder(params.alpha), lambda[params.d] * x[params.d]);
  return std::polar(radial, -phase);
}

Field forward(const Field& f) {
  f.require_space(Space::Physical, "forward");
  const double edge = boundary_magnitude(f);
  if (edge > kBoundaryWarnThreshold) {
    emit_warning("forward: field magnitude at the box boundary is " + format_double(edge) +
                 " of its maximum; the periodic/Hankel truncation is not resolved");
  }
  const auto& plan = f.grid().transform_plan();
  Field out(f.grid_ptr(), Space::Frequency, std::vector<cdouble>(f.values().begin(), f.values().end()));
  plan.apply_axial(out.values(), true);
  plan.apply_radial(out.values(), plan.radial_forward);
  return out;
}

Field inverse(const Field& spectrum) {
  spectrum.require_space(Space::Frequency, "inverse");
  const auto& plan = spectrum.grid().transform_plan();
  Field out(spectrum.grid_ptr(), Space::Physical,
            std::vector<cdouble>(spectrum.values().begin(), spectrum.values().end()));
  plan.apply_radial(out.values(), plan.radial_inverse);
  plan.apply_axial(out.values(), false);
  return out;
}

Field laplacian_symbol_apply(const Field& spectrum) {
  spectrum.require_space(Space::Frequency, "laplacian_symbol_apply");
  Field out = spectrum;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= -spectrum.grid().frequency_norm_sq(i);
  return out;
}

cdouble direct_forward_at(const Field& f, std::span<const double> lambda) {
  f.require_space(Space::Physical, "direct_forward_at");
  const Grid& g = f.grid();
  std::vector<double> x(static_cast<std::size_t>(g.dim()) + 1);
  std::vector<cdouble> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    g.point(i, x);
    terms[i] = f[i] * eigenfunction(g.params(), x, lambda) * g.weight(i);
  }
  return pairwise_sum(terms);
}

Field direct_forward(const Field& f) {
  f.require_space(Space::Physical, "direct_forward");
  const Grid& g = f.grid();
  Field out(f.grid_ptr(), Space::Frequency);
  std::vector<double> lam(static_cast<std::size_t>(g.dim()) + 1);
  for (std::size_t m = 0; m < out.size(); ++m) {
    g.frequency_point(m, lam);
    out[m] = direct_forward_at(f, lam);
  }
  return out;
}

}  // namespace weinstein
