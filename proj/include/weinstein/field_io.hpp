#pragma once

#include <iosfwd>
#include <string>

#include "weinstein/field.hpp"

namespace weinstein {

/// Binary field layout, little-endian:
///   char[8] "WNSTFLD1", double alpha, int32 d, int32 axial_n, int32 radial_n,
///   double L, double R, uint8 space (0 physical, 1 frequency), then
///   size() pairs of doubles (re, im) in field order.
void write_field(std::ostream& out, const Field& f);
void write_field(const std::string& path, const Field& f);
/// Rebuilds the grid from the header. Throws ConfigError on a malformed stream.
Field read_field(std::istream& in);
Field read_field(const std::string& path);

/// CSV with one row per node: coordinates (x_1..x_{d+1} or lambda_1..), re, im.
void write_field_csv(std::ostream& out, const Field& f);

/// Shortest decimal that round-trips the double ("inf", "-inf", "nan" otherwise).
std::string format_double(double v);

}  // namespace weinstein
