#include "wheelleg/csv_log.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "wheelleg/errors.hpp"
#include "wheelleg/text_format.hpp"

namespace wheelleg {
namespace {

constexpr std::size_t kColumns = 25;

}  // namespace

std::string csv_header() {
  std::string h = "t,X_ref,Y_ref,theta_ref,X,Y,theta,v_x,v_y,omega_r,d,gamma";
  for (const char* group : {"u", "delta", "lambda"}) {
    for (int i = 1; i <= 4; ++i) h += "," + std::string(group) + std::to_string(i);
  }
  return h + ",solve_time";
}

void write_csv(std::ostream& out, const TrajectoryLog& log) {
  using text::format_double;
  out << csv_header() << '\n';
  for (const auto& r : log.rows) {
    out << format_double(r.t);
    for (double v : {r.x_ref, r.y_ref, r.theta_ref, r.x, r.y, r.theta, r.v_x, r.v_y, r.omega_r, r.d}) {
      out << ',' << format_double(v);
    }
    out << ',' << r.gamma;
    for (const auto* group : {&r.u, &r.delta, &r.lambda}) {
      for (double v : *group) out << ',' << format_double(v);
    }
    out << ',' << format_double(r.solve_time) << '\n';
  }
}

std::string to_csv(const TrajectoryLog& log) {
  std::ostringstream out;
  write_csv(out, log);
  return out.str();
}

void save_csv(const std::filesystem::path& file, const TrajectoryLog& log) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot open " + file.string() + " for writing");
  write_csv(out, log);
  if (!out) throw IoError("failed writing " + file.string());
}

TrajectoryLog parse_csv(std::string_view text) {
  TrajectoryLog log;
  int line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text::trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != csv_header()) throw ParseError("unexpected CSV header", "header", line_no);
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != kColumns) {
      throw ParseError("expected " + std::to_string(kColumns) + " columns, got " +
                           std::to_string(cells.size()),
                       "row", line_no);
    }
    auto num = [&](std::size_t i) { return text::parse_double(cells[i], "column", line_no); };
    LogRow r;
    r.t = num(0);
    r.x_ref = num(1);
    r.y_ref = num(2);
    r.theta_ref = num(3);
    r.x = num(4);
    r.y = num(5);
    r.theta = num(6);
    r.v_x = num(7);
    r.v_y = num(8);
    r.omega_r = num(9);
    r.d = num(10);
    r.gamma = text::parse_int(cells[11], "gamma", line_no);
    for (std::size_t i = 0; i < 4; ++i) {
      r.u[i] = num(12 + i);
      r.delta[i] = num(16 + i);
      r.lambda[i] = num(20 + i);
    }
    r.solve_time = num(24);
    if (!log.rows.empty() && !(r.t > log.rows.back().t)) {
      throw ParseError("time must increase strictly", "t", line_no);
    }
    log.rows.push_back(r);
  }
  if (!header_seen) throw ParseError("empty CSV log", "header", 0);
  return log;
}

TrajectoryLog load_csv(const std::filesystem::path& file) {
  return parse_csv(text::read_file(file.string()));
}

}  // namespace wheelleg
