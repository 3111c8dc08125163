#pragma once

#include <span>
#include <utility>
#include <vector>

#include "crnoma/ladder.hpp"
#include "crnoma/rng.hpp"
#include "crnoma/system.hpp"

namespace crnoma {

/// Outcome of assigning ladder levels to secondary users in one slot.
/// A user whose assigned level exceeds its power budget keeps silent and is
/// the only one affected; success therefore coincides with feasibility.
struct ScheduleOutcome {
  int k_supported = 0;
  std::vector<std::pair<int, int>> assignments;  // (user id, level index), level ascending
  std::vector<int> silent_users;                 // sorted user ids
  std::vector<int> successes;                    // sorted user ids; assigned \ silent
};

/// Draws min(k, M) distinct users uniformly at random and hands level j to
/// the j-th sampled user.  Needs no channel knowledge at the scheduler.
ScheduleOutcome schedule_random(const SnrLadder& ladder, double snr_linear,
                                int k_supported,
                                std::span<const ChannelGain> users,
                                RngStream& stream);

/// Selects the min(k, M) users with the largest gains and assigns ascending
/// levels to ascending gains within the selection, so the strongest user
/// carries the highest (most power-hungry) level.  Gain ties break toward
/// the smaller user id.
ScheduleOutcome schedule_greedy(const SnrLadder& ladder, double snr_linear,
                                int k_supported,
                                std::span<const ChannelGain> users);

}  // namespace crnoma
