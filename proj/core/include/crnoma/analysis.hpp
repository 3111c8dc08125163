#pragma once

#include <vector>

#include "crnoma/system.hpp"

namespace crnoma {

/// Distribution of the supported-level count K, either analytic (truncated
/// where the survival function drops below a tolerance, remainder recorded
/// in tail_mass) or empirical (tail_mass 0).
struct KPmf {
  std::vector<double> probs;  // probs[n] = P(K = n), n = 0..truncation_index
  double tail_mass = 0.0;
  int truncation_index = 0;

  double prob(int n) const {
    return n >= 0 && n < static_cast<int>(probs.size())
               ? probs[static_cast<std::size_t>(n)]
               : 0.0;
  }
};

struct KMean {
  double mean = 0.0;        // truncated sum of n * P(K = n)
  double tail_bound = 0.0;  // rigorous bound on the discarded remainder
};

/// P(K >= n) = exp(-eps*(1+eps)^n / P) for n >= 1.
double k_exceedance(const SystemParams& params, int n);

/// Probability a user can afford level k under its power budget:
/// P(P_k / |h|^2 <= P) = exp(-P_k / P).
double level_feasible_prob(const SystemParams& params, int k);

/// Exact pmf of K:
///   P(K = 0) = 1 - exp(-(eps^2 + eps)/P),
///   P(K = n) = exp(-(eps + eps*eta_n)/P) - exp(-(eps + eps*eta_{n+1})/P).
/// Truncated at the first n whose analytic tail drops below tol.
KPmf k_pmf(const SystemParams& params, double tol);

/// E{K} over the truncated support.  The discarded remainder
/// sum_{n>n0} n*P(K=n) is bounded by Abel summation as
/// (n0+1)*S_{n0+1} + S_{n0+2}/(1 - S_{n0+3}/S_{n0+2}), valid because the
/// survival ratios S_{n+1}/S_n decrease in n; the bound is reported in
/// tail_bound.
KMean k_mean(const SystemParams& params, double tol);

/// Expected secondary sum-rate under random scheduling with M users:
///   R * [ sum_{n=1}^{M-1} (S_n - S_{n+1}) * C_n  +  S_M * C_M ],
/// where C_n = sum_{k<=n} exp(-P_k/P).  The infinite part of the n-sum
/// telescopes to S_M, so the evaluation is exact.
double sum_rate_closed_form(const SystemParams& params);

/// Per-frame success probabilities of the tagged user across one
/// super-frame.  In frame 1 it transmits as the primary, so
/// phi_1 = exp(-eps/P).  In frame m >= 2 it is the secondary on level
/// M-m+2, which succeeds when that level is both supported by the frame's
/// primary and affordable:
///   phi_m = P(K >= M-m+2) * exp(-P_{M-m+2}/P).
class PhiVector {
 public:
  explicit PhiVector(std::vector<double> values) : values_(std::move(values)) {}

  /// Frames per super-frame (M+1).
  int frames() const { return static_cast<int>(values_.size()) - 1; }

  /// phi_m, 1-based.
  double operator[](int m) const { return values_[static_cast<std::size_t>(m)]; }

 private:
  std::vector<double> values_;  // values_[0] unused
};

PhiVector phi_vector(const SystemParams& params);

/// psi_m^n = prod_{p=m}^{n} (1 - phi_p); empty product (m > n) is 1.
double psi(const PhiVector& phi, int m, int n);

enum class AoiConvention {
  ratio,      // T + sum(y^2)/sum(y) over inter-update gaps ("paper")
  trapezoid,  // T + sum(y^2)/(2*sum(y)), the sawtooth time average
};

const char* to_string(AoiConvention convention);

/// Average AoI of plain round-robin TDMA, where the tagged user attempts
/// once per super-frame and succeeds with probability exp(-eps/P):
///   T + (M+1)*N*T*(2*exp(eps/P) - 1)         (ratio convention)
/// with the ratio term halved under the trapezoid convention.
double aoi_tdma(const SystemParams& params,
                AoiConvention convention = AoiConvention::ratio);

struct AoiClosedForm {
  double value_seconds = 0.0;
  AoiConvention convention = AoiConvention::ratio;
  double delta_y = 0.0;   // phi-weighted first moment of the gap length
  double delta_y2 = 0.0;  // phi-weighted second moment
};

/// Average AoI when the TDMA network carries the NOMA add-on, so the tagged
/// user gets one attempt in every frame of the super-frame.  Gaps between
/// consecutive successes decompose over (previous frame m, next frame n,
/// q fully idle super-frames in between); the q-series with ratio
/// r = prod_p (1 - phi_p) is summed in closed arithmetico-geometric form:
///   sum (q+1) r^q = 1/(1-r)^2,  sum (q+1)^2 r^q = (1+r)/(1-r)^3.
/// Throws std::domain_error if r >= 1 or if every phi underflows to zero.
AoiClosedForm aoi_crnoma(const SystemParams& params,
                         AoiConvention convention = AoiConvention::ratio);

}  // namespace crnoma
