#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "wheelleg/sim.hpp"

namespace wheelleg {

/// t,X_ref,Y_ref,theta_ref,X,Y,theta,v_x,v_y,omega_r,d,gamma,u1..u4,
/// delta1..delta4,lambda1..lambda4,solve_time
std::string csv_header();

/// Doubles are written in shortest round-trip form.
void write_csv(std::ostream& out, const TrajectoryLog& log);
std::string to_csv(const TrajectoryLog& log);
void save_csv(const std::filesystem::path& file, const TrajectoryLog& log);

/// Throws ParseError on a wrong header or malformed row.
TrajectoryLog parse_csv(std::string_view text);
TrajectoryLog load_csv(const std::filesystem::path& file);

}  // namespace wheelleg
