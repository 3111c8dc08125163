#pragma once

#include <cmath>

namespace crnoma {

/// Scalar system configuration shared by every component: target rate R in
/// bits per channel use, transmit SNR P in linear scale (noise power
/// normalized to 1), number of secondary users M, slots per TDMA frame N,
/// and slot duration T in seconds.
struct SystemParams {
  double rate_bpcu = 1.0;
  double snr_linear = 1.0;
  int num_secondary = 1;
  int slots_per_frame = 1;
  double slot_seconds = 1.0;

  /// SINR threshold eps = 2^R - 1 implied by the common target rate.
  double epsilon() const { return std::exp2(rate_bpcu) - 1.0; }

  double frame_seconds() const { return slots_per_frame * slot_seconds; }

  /// A super-frame serves every user once: M+1 frames of N slots.
  int frames_per_super_frame() const { return num_secondary + 1; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Squared channel magnitude |h|^2.  Under the Rayleigh model used
/// throughout, gains are unit-mean exponential and i.i.d. across users
/// and slots.
struct ChannelGain {
  double power_gain = 0.0;
};

}  // namespace crnoma
