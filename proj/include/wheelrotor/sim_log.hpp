#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wheelrotor/core_math.hpp"

namespace wheelrotor {

enum class Mode { Aerial, Ground };

std::string_view to_string(Mode m);
/// Throws InvalidInput for anything other than "aerial" or "ground".
Mode mode_from_string(std::string_view s);

struct LogRow {
  double t{0.0};
  Mode mode{Mode::Aerial};
  Vec3 pos{Vec3::Zero()};
  Vec3 vel{Vec3::Zero()};
  Quaternion q{};
  Vec3 omega{Vec3::Zero()};
  double delta{0.0};
  double v_fwd{0.0};
  double gamma{0.0};
  double gamma_dot{0.0};
  double theta1{0.0};
  double theta2{0.0};
  double f1{0.0};
  double f2{0.0};
  double w_whl1{0.0};
  double w_whl2{0.0};
  double power_w{0.0};
  std::string event;  // '|'-separated flags, empty when nothing happened

  bool all_finite() const;
};

/// Uniformly sampled simulation record. A run that ends early carries the
/// terminal flag on its last row.
struct SimLog {
  std::vector<LogRow> rows;
  bool terminated{false};
  std::string terminal_event;
};

/// CSV column order, fixed.
const std::vector<std::string>& csv_columns();

void write_csv(const SimLog& log, std::ostream& out);

/// Throws InvalidInput on an empty log (no file is created) and IoError on
/// write failures.
void export_csv(const SimLog& log, const std::filesystem::path& path);

SimLog parse_csv(std::istream& in);
SimLog read_csv(const std::filesystem::path& path);

}  // namespace wheelrotor
