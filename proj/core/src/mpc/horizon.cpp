#include "wheelleg/mpc/horizon.hpp"

#include <algorithm>
#include <cmath>

#include "wheelleg/errors.hpp"

namespace wheelleg::mpc {

double horizon_end(double t_now, double delta_t, std::optional<double> next_switch) {
  if (!(delta_t > 0.0)) throw DomainError("horizon_end: delta_t must be positive");
  if (next_switch && *next_switch > t_now && *next_switch <= t_now + delta_t) return *next_switch;
  return t_now + delta_t;
}

std::vector<std::size_t> segment_ends(double t_now, double dt, std::size_t steps,
                                      std::span<const double> switch_times) {
  std::vector<std::size_t> ends;
  if (steps == 0) return ends;
  const double t_final = t_now + dt * static_cast<double>(steps);
  double t = t_now;
  while (true) {
    std::optional<double> next;
    for (double s : switch_times) {
      if (s > t) {
        next = s;
        break;
      }
    }
    const double t_next = horizon_end(t, t_final - t, next);
    const auto raw = std::ceil((t_next - t_now) / dt - 1e-9);
    const auto idx = static_cast<std::size_t>(std::clamp(raw, 1.0, static_cast<double>(steps)));
    if (ends.empty() || idx > ends.back()) ends.push_back(idx);
    if (idx >= steps) break;
    t = t_next;
  }
  return ends;
}

}  // namespace wheelleg::mpc
