#include "weinstein/field_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "weinstein/errors.hpp"

namespace weinstein {

static_assert(std::endian::native == std::endian::little, "field IO assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'W', 'N', 'S', 'T', 'F', 'L', 'D', '1'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw ConfigError("read_field: truncated header");
  return v;
}

}  // namespace

void write_field(std::ostream& out, const Field& f) {
  const Grid& g = f.grid();
  out.write(kMagic, sizeof(kMagic));
  put<double>(out, g.params().alpha);
  put<std::int32_t>(out, g.dim());
  put<std::int32_t>(out, g.axial_n());
  put<std::int32_t>(out, g.radial_n());
  put<double>(out, g.half_width());
  put<double>(out, g.radial_extent());
  put<std::uint8_t>(out, f.space() == Space::Physical ? 0 : 1);
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.size() * sizeof(cdouble)));
  if (!out) throw ConfigError("write_field: stream error");
}

void write_field(const std::string& path, const Field& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("write_field: cannot open " + path);
  write_field(out, f);
}

Field read_field(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ConfigError("read_field: bad magic");
  }
  const double alpha = get<double>(in);
  const int d = get<std::int32_t>(in);
  const int axial_n = get<std::int32_t>(in);
  const int radial_n = get<std::int32_t>(in);
  const double L = get<double>(in);
  const double R = get<double>(in);
  const auto tag = get<std::uint8_t>(in);
  if (tag > 1) throw ConfigError("read_field: bad space tag");
  const GridPtr grid = Grid::build(WeinsteinParams::make(alpha, d), axial_n, L, radial_n, R);
  std::vector<cdouble> values(grid->size());
  if (!in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(cdouble)))) {
    throw ConfigError("read_field: truncated payload");
  }
  return Field(grid, tag == 0 ? Space::Physical : Space::Frequency, std::move(values));
}

Field read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("read_field: cannot open " + path);
  return read_field(in);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_field_csv(std::ostream& out, const Field& f) {
  const Grid& g = f.grid();
  const int d = g.dim();
  const char* prefix = f.space() == Space::Physical ? "x" : "lambda";
  for (int i = 0; i <= d; ++i) out << prefix << (i + 1) << ',';
  out << "re,im\n";
  std::vector<double> pt(static_cast<std::size_t>(d) + 1);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.space() == Space::Physical) {
      g.point(i, pt);
    } else {
      g.frequency_point(i, pt);
    }
    for (double v : pt) out << format_double(v) << ',';
    out << format_double(f[i].real()) << ',' << format_double(f[i].imag()) << '\n';
  }
}

}  // namespace weinstein
