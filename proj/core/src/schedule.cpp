#include "crnoma/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace crnoma {

namespace {

// Applies the silence rule: a user transmits at P_level/|h|^2, which must
// not exceed the power budget P.  Written multiplicatively so zero gains
// need no special case.
void resolve_feasibility(const SnrLadder& ladder, double snr_linear,
                         std::span<const ChannelGain> users,
                         ScheduleOutcome& out) {
  for (const auto& [user, level] : out.assignments) {
    const bool feasible =
        ladder.level(level) <=
        snr_linear * users[static_cast<std::size_t>(user)].power_gain;
    if (feasible) {
      out.successes.push_back(user);
    } else {
      out.silent_users.push_back(user);
    }
  }
  std::sort(out.silent_users.begin(), out.silent_users.end());
  std::sort(out.successes.begin(), out.successes.end());
}

int assignable_count(const SnrLadder& ladder, int k_supported,
                     std::span<const ChannelGain> users) {
  if (users.empty()) {
    throw std::invalid_argument("schedule: users must be nonempty");
  }
  const int count = std::min<int>(std::max(k_supported, 0),
                                  static_cast<int>(users.size()));
  if (count > ladder.size()) {
    throw std::invalid_argument(
        "schedule: ladder holds fewer levels than min(K, M)");
  }
  return count;
}

}  // namespace

ScheduleOutcome schedule_random(const SnrLadder& ladder, double snr_linear,
                                int k_supported,
                                std::span<const ChannelGain> users,
                                RngStream& stream) {
  const int count = assignable_count(ladder, k_supported, users);

  ScheduleOutcome out;
  out.k_supported = k_supported;
  out.assignments.reserve(static_cast<std::size_t>(count));

  // Partial Fisher-Yates: the first `count` slots end up as a uniform
  // sample without replacement, in drawing order.
  std::vector<int> ids(users.size());
  std::iota(ids.begin(), ids.end(), 0);
  for (int j = 0; j < count; ++j) {
    const auto pick =
        j + static_cast<int>(stream.bounded(users.size() - static_cast<std::size_t>(j)));
    std::swap(ids[static_cast<std::size_t>(j)], ids[static_cast<std::size_t>(pick)]);
    out.assignments.emplace_back(ids[static_cast<std::size_t>(j)], j + 1);
  }

  resolve_feasibility(ladder, snr_linear, users, out);
  return out;
}

ScheduleOutcome schedule_greedy(const SnrLadder& ladder, double snr_linear,
                                int k_supported,
                                std::span<const ChannelGain> users) {
  const int count = assignable_count(ladder, k_supported, users);

  ScheduleOutcome out;
  out.k_supported = k_supported;
  out.assignments.reserve(static_cast<std::size_t>(count));

  std::vector<int> order(users.size());
  std::iota(order.begin(), order.end(), 0);
  const auto gain = [&](int id) {
    return users[static_cast<std::size_t>(id)].power_gain;
  };
  // Strongest `count` users first, smaller id winning ties.
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (gain(a) != gain(b)) return gain(a) > gain(b);
    return a < b;
  });
  // Within the selection, ascending level goes to ascending gain.
  std::sort(order.begin(), order.begin() + count, [&](int a, int b) {
    if (gain(a) != gain(b)) return gain(a) < gain(b);
    return a < b;
  });
  for (int j = 0; j < count; ++j) {
    out.assignments.emplace_back(order[static_cast<std::size_t>(j)], j + 1);
  }

  resolve_feasibility(ladder, snr_linear, users, out);
  return out;
}

}  // namespace crnoma
