#pragma once

#include <cstdint>
#include <vector>

#include "crnoma/analysis.hpp"
#include "crnoma/schedule.hpp"
#include "crnoma/system.hpp"

namespace crnoma {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // NaN when undefined (fewer than 2 samples)
  std::int64_t trials = 0;
};

enum class Scheduler { random, greedy };
enum class AoiScheme { tdma, crnoma };

const char* to_string(Scheduler scheduler);
const char* to_string(AoiScheme scheme);

// Work is split into fixed-size chunks, one RNG substream per chunk, and
// partial results are reduced in chunk order.  The chunk sizes are part of
// the reproducibility contract: changing them changes the stream layout.
inline constexpr std::int64_t kTrialsPerChunk = std::int64_t{1} << 16;
inline constexpr std::int64_t kSuperFramesPerChunk = std::int64_t{1} << 12;

struct KSimulation {
  KPmf pmf;  // empirical; tail_mass 0
  Estimate mean;
};

/// Samples the primary channel per trial and histograms the supported-level
/// count K.
KSimulation simulate_k(const SystemParams& params, std::int64_t trials,
                       std::uint64_t seed, int workers = 1);

/// Full protocol per trial: budget -> K -> M secondary gains -> scheduling
/// -> silence rule; the trial's rate is R times the number of non-silent
/// assigned users.  Returns mean and standard error in bits per channel use.
Estimate simulate_sum_rate(const SystemParams& params, Scheduler scheduler,
                           std::int64_t trials, std::uint64_t seed,
                           int workers = 1);

struct AoiTrace {
  std::vector<double> inter_success_intervals_seconds;
  double horizon_seconds = 0.0;
  std::int64_t successes_count = 0;
};

struct AoiSimulation {
  AoiTrace trace;
  Estimate ratio;      // T + sum(y^2)/sum(y), jackknife standard error
  Estimate trapezoid;  // T + sum(y^2)/(2*sum(y))
  std::vector<std::int64_t> frame_success_counts;  // per frame position, size M+1
  std::int64_t super_frames = 0;

  const Estimate& estimate(AoiConvention convention) const {
    return convention == AoiConvention::ratio ? ratio : trapezoid;
  }
};

/// Frame-synchronous AoI timeline of the tagged user over
/// super_frames*(M+1) frames.
///
/// tdma:   one attempt per super-frame (frame 1), success iff P*|h|^2 >= eps.
/// crnoma: frame 1 as primary (same rule); in frame m >= 2 a fresh primary
///         gain decides K_m, the tagged user holds level M-m+2, attempts iff
///         K_m >= M-m+2 and succeeds iff the level is also affordable.
///
/// Gaps are recorded between consecutive successes; each chunk drops the
/// leading segment before its first success and the trailing incomplete
/// one.  Throws std::runtime_error if fewer than 100 successes occurred.
AoiSimulation simulate_aoi(const SystemParams& params, AoiScheme scheme,
                           std::int64_t super_frames, std::uint64_t seed,
                           int workers = 1);

/// Success set recomputed from scratch for the given assignment, optionally
/// pretending one user is absent.  Success depends only on the user's own
/// gain and level, which is what makes the silence rule isolating; tests
/// assert the recomputed set never changes when a silent user is removed.
std::vector<int> recompute_successes(const SnrLadder& ladder,
                                     double snr_linear,
                                     std::span<const std::pair<int, int>> assignments,
                                     std::span<const ChannelGain> users,
                                     int excluded_user = -1);

}  // namespace crnoma
