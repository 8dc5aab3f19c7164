#include "wheelrotor/sim_log.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "wheelrotor/errors.hpp"

namespace wheelrotor {

std::string_view to_string(Mode m) { return m == Mode::Aerial ? "aerial" : "ground"; }

Mode mode_from_string(std::string_view s) {
  if (s == "aerial") return Mode::Aerial;
  if (s == "ground") return Mode::Ground;
  throw InvalidInput("unknown mode '" + std::string(s) + "'");
}

bool LogRow::all_finite() const {
  const double scalars[] = {t,      delta,  v_fwd,  gamma,  gamma_dot, theta1, theta2,
                            f1,     f2,     w_whl1, w_whl2, power_w,   q.eta};
  for (double v : scalars)
    if (!std::isfinite(v)) return false;
  return pos.allFinite() && vel.allFinite() && q.eps.allFinite() && omega.allFinite();
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "t",  "mode", "x",     "y",     "z",         "vx",     "vy",     "vz",     "qw",
      "qx", "qy",   "qz",    "wx",    "wy",        "wz",     "delta",  "v_fwd",  "gamma",
      "gamma_dot",  "theta1", "theta2", "f1",       "f2",     "w_whl1", "w_whl2", "power_w",
      "event"};
  return cols;
}

namespace {

void put(std::string& line, double v) {
  line += fmt::format("{:.9g}", v);
  line += ',';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput(fmt::format("csv line {}: bad number '{}'", line_no, s));
  }
}

}  // namespace

void write_csv(const SimLog& log, std::ostream& out) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  std::string line;
  for (const auto& r : log.rows) {
    line.clear();
    put(line, r.t);
    line += to_string(r.mode);
    line += ',';
    for (double v : {r.pos.x(), r.pos.y(), r.pos.z(), r.vel.x(), r.vel.y(), r.vel.z(), r.q.eta,
                     r.q.eps.x(), r.q.eps.y(), r.q.eps.z(), r.omega.x(), r.omega.y(),
                     r.omega.z(), r.delta, r.v_fwd, r.gamma, r.gamma_dot, r.theta1, r.theta2,
                     r.f1, r.f2, r.w_whl1, r.w_whl2, r.power_w}) {
      put(line, v);
    }
    line += r.event;
    out << line << '\n';
  }
}

void export_csv(const SimLog& log, const std::filesystem::path& path) {
  if (log.rows.empty()) throw InvalidInput("refusing to export an empty log");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_csv(log, out);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

SimLog parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("csv: missing header");
  const auto header = split(line);
  if (header != csv_columns()) throw InvalidInput("csv: unexpected header");

  SimLog log;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != header.size()) {
      throw InvalidInput(fmt::format("csv line {}: expected {} fields, got {}", line_no,
                                     header.size(), f.size()));
    }
    std::size_t i = 0;
    auto num = [&]() { return to_double(f[i++], line_no); };
    LogRow r;
    r.t = num();
    r.mode = mode_from_string(f[i++]);
    r.pos = {num(), num(), num()};
    r.vel = {num(), num(), num()};
    r.q.eta = num();
    r.q.eps = {num(), num(), num()};
    r.omega = {num(), num(), num()};
    r.delta = num();
    r.v_fwd = num();
    r.gamma = num();
    r.gamma_dot = num();
    r.theta1 = num();
    r.theta2 = num();
    r.f1 = num();
    r.f2 = num();
    r.w_whl1 = num();
    r.w_whl2 = num();
    r.power_w = num();
    r.event = f[i];
    log.rows.push_back(std::move(r));
  }
  return log;
}

SimLog read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_csv(in);
}

}  // namespace wheelrotor
