#include "crnoma/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "crnoma/ladder.hpp"
#include "crnoma/rng.hpp"

namespace crnoma {

namespace {

// Runs `total` units of work in fixed-size chunks, chunk i drawing from
// RngStream(seed, i).  Partials are stored by chunk index and must be
// reduced in that order by the caller, which makes the aggregate
// independent of how many workers executed the chunks.
template <typename Partial, typename Fn>
std::vector<Partial> run_chunked(std::int64_t total, std::int64_t per_chunk,
                                 std::uint64_t seed, int workers, Fn&& fn) {
  const std::int64_t n_chunks = (total + per_chunk - 1) / per_chunk;
  std::vector<Partial> partials(static_cast<std::size_t>(n_chunks));
  auto run_one = [&](std::int64_t c) {
    const std::int64_t begin = c * per_chunk;
    const std::int64_t count = std::min(per_chunk, total - begin);
    RngStream stream(seed, static_cast<std::uint64_t>(c));
    partials[static_cast<std::size_t>(c)] = fn(stream, count);
  };

  if (workers <= 1 || n_chunks <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) run_one(c);
    return partials;
  }

  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks || failed.load()) return;
      try {
        run_one(c);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads =
      static_cast<int>(std::min<std::int64_t>(workers, n_chunks));
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return partials;
}

void require_trials(std::int64_t trials) {
  if (trials < 1) throw std::invalid_argument("trials: must be >= 1");
}

double stderr_from_moments(double sum, double sum_sq, std::int64_t n) {
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mean = sum / static_cast<double>(n);
  const double var =
      (sum_sq / static_cast<double>(n) - mean * mean) *
      (static_cast<double>(n) / static_cast<double>(n - 1));
  return std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
}

}  // namespace

const char* to_string(Scheduler scheduler) {
  return scheduler == Scheduler::random ? "random" : "greedy";
}

const char* to_string(AoiScheme scheme) {
  return scheme == AoiScheme::tdma ? "tdma" : "crnoma";
}

KSimulation simulate_k(const SystemParams& params, std::int64_t trials,
                       std::uint64_t seed, int workers) {
  params.validate();
  require_trials(trials);

  struct Partial {
    std::vector<std::int64_t> counts;
  };
  const double eps = params.epsilon();
  const double snr = params.snr_linear;
  auto partials = run_chunked<Partial>(
      trials, kTrialsPerChunk, seed, workers,
      [&](RngStream& stream, std::int64_t count) {
        Partial p;
        for (std::int64_t t = 0; t < count; ++t) {
          const double budget = snr * stream.exponential() / eps - 1.0;
          const int k = supported_levels_from_budget(eps, budget);
          if (k >= static_cast<int>(p.counts.size())) {
            p.counts.resize(static_cast<std::size_t>(k) + 1, 0);
          }
          ++p.counts[static_cast<std::size_t>(k)];
        }
        return p;
      });

  std::vector<std::int64_t> counts;
  for (const auto& p : partials) {
    if (p.counts.size() > counts.size()) counts.resize(p.counts.size(), 0);
    for (std::size_t i = 0; i < p.counts.size(); ++i) counts[i] += p.counts[i];
  }

  KSimulation out;
  out.pmf.truncation_index = static_cast<int>(counts.size()) - 1;
  out.pmf.tail_mass = 0.0;
  out.pmf.probs.reserve(counts.size());
  std::int64_t first = 0;   // sum n * count
  std::int64_t second = 0;  // sum n^2 * count
  for (std::size_t n = 0; n < counts.size(); ++n) {
    out.pmf.probs.push_back(static_cast<double>(counts[n]) /
                            static_cast<double>(trials));
    first += static_cast<std::int64_t>(n) * counts[n];
    second += static_cast<std::int64_t>(n * n) * counts[n];
  }
  out.mean.trials = trials;
  out.mean.mean = static_cast<double>(first) / static_cast<double>(trials);
  out.mean.std_error = stderr_from_moments(static_cast<double>(first),
                                           static_cast<double>(second), trials);
  return out;
}

Estimate simulate_sum_rate(const SystemParams& params, Scheduler scheduler,
                           std::int64_t trials, std::uint64_t seed,
                           int workers) {
  params.validate();
  require_trials(trials);

  const double eps = params.epsilon();
  const double snr = params.snr_linear;
  const double rate = params.rate_bpcu;
  const int m_users = params.num_secondary;
  // Assignments never use more than M levels regardless of K.
  const SnrLadder ladder = build_ladder(params, m_users);

  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  auto partials = run_chunked<Partial>(
      trials, kTrialsPerChunk, seed, workers,
      [&](RngStream& stream, std::int64_t count) {
        Partial p;
        std::vector<ChannelGain> gains(static_cast<std::size_t>(m_users));
        for (std::int64_t t = 0; t < count; ++t) {
          const double budget = snr * stream.exponential() / eps - 1.0;
          const int k = supported_levels_from_budget(eps, budget);
          for (auto& g : gains) g = sample_channel(stream);
          const ScheduleOutcome outcome =
              scheduler == Scheduler::random
                  ? schedule_random(ladder, snr, k, gains, stream)
                  : schedule_greedy(ladder, snr, k, gains);
          const double x = rate * static_cast<double>(outcome.successes.size());
          p.sum += x;
          p.sum_sq += x * x;
        }
        return p;
      });

  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& p : partials) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  Estimate est;
  est.trials = trials;
  est.mean = sum / static_cast<double>(trials);
  est.std_error = stderr_from_moments(sum, sum_sq, trials);
  return est;
}

AoiSimulation simulate_aoi(const SystemParams& params, AoiScheme scheme,
                           std::int64_t super_frames, std::uint64_t seed,
                           int workers) {
  params.validate();
  if (super_frames < 1) {
    throw std::invalid_argument("super_frames: must be >= 1");
  }

  const double eps = params.epsilon();
  const double snr = params.snr_linear;
  const int frames = params.frames_per_super_frame();
  const double frame_sec = params.frame_seconds();
  const SnrLadder ladder = build_ladder(params, params.num_secondary);

  struct Partial {
    std::vector<double> intervals;
    std::vector<std::int64_t> frame_successes;
    std::int64_t successes = 0;
  };
  auto partials = run_chunked<Partial>(
      super_frames, kSuperFramesPerChunk, seed, workers,
      [&](RngStream& stream, std::int64_t count) {
        Partial p;
        p.frame_successes.assign(static_cast<std::size_t>(frames), 0);
        std::int64_t frame_index = 0;
        std::int64_t prev_success = -1;
        for (std::int64_t sf = 0; sf < count; ++sf) {
          for (int m = 1; m <= frames; ++m, ++frame_index) {
            bool success = false;
            if (m == 1) {
              // Primary role: the slot works iff the link alone reaches R.
              success = snr * stream.exponential() >= eps;
            } else if (scheme == AoiScheme::crnoma) {
              const double budget = snr * stream.exponential() / eps - 1.0;
              const int level = params.num_secondary - m + 2;
              if (supported_levels_from_budget(eps, budget) >= level) {
                success =
                    ladder.level(level) <= snr * stream.exponential();
              }
            }
            if (success) {
              ++p.successes;
              ++p.frame_successes[static_cast<std::size_t>(m - 1)];
              if (prev_success >= 0) {
                p.intervals.push_back(
                    static_cast<double>(frame_index - prev_success) * frame_sec);
              }
              prev_success = frame_index;
            }
          }
        }
        return p;
      });

  AoiSimulation out;
  out.super_frames = super_frames;
  out.frame_success_counts.assign(static_cast<std::size_t>(frames), 0);
  out.trace.horizon_seconds =
      static_cast<double>(super_frames) * frames * frame_sec;
  std::size_t n_intervals = 0;
  for (const auto& p : partials) n_intervals += p.intervals.size();
  out.trace.inter_success_intervals_seconds.reserve(n_intervals);
  for (const auto& p : partials) {
    out.trace.successes_count += p.successes;
    for (int m = 0; m < frames; ++m) {
      out.frame_success_counts[static_cast<std::size_t>(m)] +=
          p.frame_successes[static_cast<std::size_t>(m)];
    }
    out.trace.inter_success_intervals_seconds.insert(
        out.trace.inter_success_intervals_seconds.end(), p.intervals.begin(),
        p.intervals.end());
  }

  if (out.trace.successes_count < 100) {
    throw std::runtime_error(
        "simulate_aoi: insufficient successes (" +
        std::to_string(out.trace.successes_count) +
        " < 100); the ratio estimate would be unreliable at these parameters");
  }

  const auto& y = out.trace.inter_success_intervals_seconds;
  const auto n = static_cast<std::int64_t>(y.size());
  double sum_y = 0.0;
  double sum_y2 = 0.0;
  for (const double v : y) {
    sum_y += v;
    sum_y2 += v * v;
  }
  const double t_slot = params.slot_seconds;
  out.ratio.trials = n;
  out.trapezoid.trials = n;
  out.ratio.mean = t_slot + sum_y2 / sum_y;
  out.trapezoid.mean = t_slot + sum_y2 / (2.0 * sum_y);

  // Delete-one jackknife of the ratio statistic.  The trapezoid estimate
  // differs only by halving the ratio term, so its pseudovalue deviations
  // are exactly half as large.
  double jack_mean = 0.0;
  for (const double v : y) {
    jack_mean += (sum_y2 - v * v) / (sum_y - v);
  }
  jack_mean /= static_cast<double>(n);
  double jack_ss = 0.0;
  for (const double v : y) {
    const double d = (sum_y2 - v * v) / (sum_y - v) - jack_mean;
    jack_ss += d * d;
  }
  const double se = std::sqrt(jack_ss * static_cast<double>(n - 1) /
                              static_cast<double>(n));
  out.ratio.std_error = se;
  out.trapezoid.std_error = se / 2.0;
  return out;
}

std::vector<int> recompute_successes(
    const SnrLadder& ladder, double snr_linear,
    std::span<const std::pair<int, int>> assignments,
    std::span<const ChannelGain> users, int excluded_user) {
  std::vector<int> successes;
  for (const auto& [user, level] : assignments) {
    if (user == excluded_user) continue;
    if (ladder.level(level) <=
        snr_linear * users[static_cast<std::size_t>(user)].power_gain) {
      successes.push_back(user);
    }
  }
  std::sort(successes.begin(), successes.end());
  return successes;
}

}  // namespace crnoma
