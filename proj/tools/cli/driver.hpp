#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace swsim {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitSchema = 2;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
};

struct ParamRange {
  std::string key;
  std::vector<std::string> values;
};

/// "alpha=0:0.25:2" -> key "alpha", values 0, 0.25, ..., 2. Throws UsageError.
ParamRange parse_param_range(const std::string& spec);

int run_command(const std::string& config_path, const Overrides& ov, std::ostream& out, std::ostream& err);
int validate_command(const std::string& config_path, std::ostream& out, std::ostream& err);
int scan_command(const std::string& config_path, const std::vector<std::string>& params, const Overrides& ov,
                 std::ostream& out, std::ostream& err);

}  // namespace swsim
