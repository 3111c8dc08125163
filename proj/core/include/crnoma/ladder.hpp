#pragma once

#include <span>
#include <vector>

#include "crnoma/system.hpp"

namespace crnoma {

/// Preconfigured receive-SNR ladder P_1 < P_2 < ... with prefix sums
/// eta_n = P_1 + ... + P_n.  Level k is sized so that a signal received at
/// power P_k decodes at rate R while the k-1 lower levels remain as
/// uncancelled interference:
///
///   log2(1 + P_k / (1 + eta_{k-1})) = R  =>  P_k = eps * (1 + eta_{k-1}),
///
/// which solves to P_k = eps*(1+eps)^(k-1) and eta_n = (1+eps)^n - 1.
class SnrLadder {
 public:
  SnrLadder() = default;

  double epsilon() const { return epsilon_; }
  int size() const { return static_cast<int>(levels_.size()); }

  /// P_k, 1-based.
  double level(int k) const { return levels_[static_cast<std::size_t>(k - 1)]; }

  /// eta_n, 1-based; prefix(0) == 0.
  double prefix(int n) const {
    return n == 0 ? 0.0 : prefix_[static_cast<std::size_t>(n - 1)];
  }

  std::span<const double> levels() const { return levels_; }
  std::span<const double> prefixes() const { return prefix_; }

 private:
  friend SnrLadder build_ladder(const SystemParams& params, int kmax);

  double epsilon_ = 0.0;
  std::vector<double> levels_;
  std::vector<double> prefix_;
};

/// Maximum total secondary receive power the primary tolerates while still
/// reaching rate R: I = P*|h0|^2/eps - 1.  Negative means the primary link
/// cannot even sustain R on its own.
double interference_budget(const SystemParams& params, ChannelGain h0);

/// Builds the first kmax ladder levels by the defining recursion.  Throws
/// std::domain_error for kmax beyond the double range, reporting the
/// largest safe kmax for this epsilon.
SnrLadder build_ladder(const SystemParams& params, int kmax);

/// Largest kmax for which (1+eps)^kmax stays finite in double precision.
int max_safe_kmax(double epsilon);

/// P_k = eps*(1+eps)^(k-1), evaluated without the recursion.
double closed_form_level(double epsilon, int k);

/// eta_n = (1+eps)^n - 1; eta_0 = 0.
double eta_closed_form(double epsilon, int n);

/// Number of ladder levels that fit under an interference budget:
/// K = max{n >= 0 : eta_n <= budget}, with K = 0 whenever budget < eta_1.
/// A budget exactly on eta_{n+1} counts the extra level.
int supported_levels_from_budget(double epsilon, double budget);

/// K for a concrete primary-channel realization.
int supported_levels(const SystemParams& params, ChannelGain h0);

}  // namespace crnoma
