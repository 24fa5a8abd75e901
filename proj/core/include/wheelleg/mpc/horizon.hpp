#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace wheelleg::mpc {

/// End of the current cost segment: the next behavior switch if it falls in
/// (t_j, t_j + delta_t], otherwise t_j + delta_t.
double horizon_end(double t_now, double delta_t, std::optional<double> next_switch);

/// Splits an N-step prediction window starting at t_now into behavior
/// segments. Returns the 1-based step indices that close each segment
/// (ascending, last == steps). A switch falling inside a step closes the
/// segment at the end of that step.
std::vector<std::size_t> segment_ends(double t_now, double dt, std::size_t steps,
                                      std::span<const double> switch_times);

}  // namespace wheelleg::mpc
