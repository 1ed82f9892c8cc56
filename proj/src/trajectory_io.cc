#include "ridge/trajectory_io.h"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ridge {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const Vector& v, char sep) {
  std::string s;
  for (int j = 0; j < v.size(); ++j) {
    if (j) s += sep;
    s += fmt(v[j]);
  }
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void bad_line(std::size_t line, const std::string& what) {
  throw std::runtime_error("trajectory CSV line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& s, std::size_t line) {
  if (s.empty()) bad_line(line, "empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (*end != '\0' || errno == ERANGE) bad_line(line, "bad number '" + s + "'");
  return v;
}

long long parse_int(const std::string& s, std::size_t line) {
  if (s.empty()) bad_line(line, "empty integer");
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (*end != '\0' || errno == ERANGE) bad_line(line, "bad integer '" + s + "'");
  return v;
}

unsigned long long parse_mask(const std::string& s, std::size_t line) {
  if (s.empty() || s[0] == '-') bad_line(line, "bad set mask '" + s + "'");
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (*end != '\0' || errno == ERANGE) bad_line(line, "bad set mask '" + s + "'");
  return v;
}

Vector parse_vector(const std::string& s, std::size_t line) {
  const auto parts = split(s, ';');
  Vector v(static_cast<int>(parts.size()));
  for (std::size_t j = 0; j < parts.size(); ++j) v[j] = parse_double(parts[j], line);
  return v;
}

}  // namespace

void write_trajectory(const Trajectory& traj, std::ostream& out) {
  const int n = traj.dimension();
  std::string header = "step,epoch,i,S,event";
  for (int j = 1; j <= n; ++j) header += ",x" + std::to_string(j);
  for (int j = 1; j <= n; ++j) header += ",V" + std::to_string(j);
  out << header << '\n';
  for (const auto& r : traj.records) {
    if (r.x.size() != n || r.v.size() != n) {
      throw std::invalid_argument("write_trajectory: record dimension mismatch");
    }
    if (r.event.find_first_of(",\n") != std::string::npos) {
      throw std::invalid_argument("write_trajectory: event tag contains a separator");
    }
    out << r.step << ',' << r.epoch << ',' << (r.i + 1) << ',' << r.s_mask << ',' << r.event;
    for (int j = 0; j < n; ++j) out << ',' << fmt(r.x[j]);
    for (int j = 0; j < n; ++j) out << ',' << fmt(r.v[j]);
    out << '\n';
  }
  out << "# status=" << to_string(traj.status) << " lower=" << join(traj.domain.lower(), ';')
      << " upper=" << join(traj.domain.upper(), ';') << '\n';
}

void write_trajectory(const Trajectory& traj, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_trajectory(traj, f);
  f.flush();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

Trajectory read_trajectory(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw std::runtime_error("trajectory CSV is empty");
  const auto head = split(line, ',');
  if (head.size() < 7 || head[0] != "step" || head[1] != "epoch" || head[2] != "i" ||
      head[3] != "S" || head[4] != "event" || (head.size() - 5) % 2 != 0) {
    bad_line(lineno, "unexpected header");
  }
  const int n = static_cast<int>((head.size() - 5) / 2);
  for (int j = 0; j < n; ++j) {
    if (head[5 + j] != "x" + std::to_string(j + 1) ||
        head[5 + n + j] != "V" + std::to_string(j + 1)) {
      bad_line(lineno, "unexpected header");
    }
  }

  Trajectory traj;
  bool have_footer = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (have_footer) bad_line(lineno, "data after the status line");
    if (line[0] == '#') {
      std::istringstream fs(line.substr(1));
      std::string tok;
      std::optional<Vector> lo;
      std::optional<Vector> hi;
      bool status = false;
      while (fs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) bad_line(lineno, "bad status token '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        try {
          if (key == "status") {
            traj.status = terminal_status_from_string(val);
            status = true;
          } else if (key == "lower") {
            lo = parse_vector(val, lineno);
          } else if (key == "upper") {
            hi = parse_vector(val, lineno);
          }
        } catch (const std::invalid_argument& err) {
          bad_line(lineno, err.what());
        }
      }
      if (!status || !lo || !hi || lo->size() != n || hi->size() != n) {
        bad_line(lineno, "incomplete status line");
      }
      try {
        traj.domain = BoxDomain(*lo, *hi);
      } catch (const std::invalid_argument& err) {
        bad_line(lineno, err.what());
      }
      have_footer = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != head.size()) bad_line(lineno, "wrong number of fields");
    TrajectoryRecord r;
    r.step = parse_int(f[0], lineno);
    r.epoch = parse_int(f[1], lineno);
    r.i = static_cast<int>(parse_int(f[2], lineno)) - 1;
    r.s_mask = parse_mask(f[3], lineno);
    r.event = f[4];
    r.x.resize(n);
    r.v.resize(n);
    for (int j = 0; j < n; ++j) {
      r.x[j] = parse_double(f[5 + j], lineno);
      r.v[j] = parse_double(f[5 + n + j], lineno);
    }
    traj.records.push_back(std::move(r));
  }
  if (!have_footer) throw std::runtime_error("trajectory CSV lacks the status line");
  return traj;
}

Trajectory read_trajectory(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  return read_trajectory(f);
}

}  // namespace ridge
