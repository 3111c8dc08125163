#include "crnoma/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "crnoma/ladder.hpp"

namespace crnoma {

namespace {

void check_tol(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) {
    throw std::invalid_argument("tol: must lie in (0, 1)");
  }
}

}  // namespace

double k_exceedance(const SystemParams& params, int n) {
  // exp(-eps*(1+eps)^n / P); the pow may overflow to inf for huge n, which
  // collapses to the correct limit 0.
  const double eps = params.epsilon();
  return std::exp(-eps * std::pow(1.0 + eps, n) / params.snr_linear);
}

double level_feasible_prob(const SystemParams& params, int k) {
  return std::exp(-closed_form_level(params.epsilon(), k) / params.snr_linear);
}

KPmf k_pmf(const SystemParams& params, double tol) {
  params.validate();
  check_tol(tol);

  KPmf out;
  double surv_next = k_exceedance(params, 1);  // S_{n+1} while filling probs[n]
  out.probs.push_back(1.0 - surv_next);
  int n = 0;
  while (surv_next >= tol) {
    ++n;
    // S_n decays double-exponentially, so the loop ends after O(log log)
    // steps for any representable P; the cap only guards absurd inputs.
    if (n > 1000000) {
      throw std::runtime_error(
          "k_pmf: tolerance " + std::to_string(tol) +
          " not reachable within the floating range");
    }
    const double surv = surv_next;
    surv_next = k_exceedance(params, n + 1);
    out.probs.push_back(surv - surv_next);
  }
  out.truncation_index = n;
  out.tail_mass = surv_next;
  return out;
}

KMean k_mean(const SystemParams& params, double tol) {
  const KPmf pmf = k_pmf(params, tol);
  double mean = 0.0;
  for (int n = 1; n <= pmf.truncation_index; ++n) {
    mean += n * pmf.probs[static_cast<std::size_t>(n)];
  }

  // Abel summation of the remainder: sum_{n>n0} n*(S_n - S_{n+1})
  //   = (n0+1)*S_{n0+1} + sum_{n>=n0+2} S_n
  //  <= (n0+1)*S_{n0+1} + S_{n0+2} / (1 - S_{n0+3}/S_{n0+2}),
  // using that the survival ratios S_{n+1}/S_n decrease in n.
  const int n0 = pmf.truncation_index;
  double tail = (n0 + 1) * pmf.tail_mass;
  const double s2 = k_exceedance(params, n0 + 2);
  if (s2 > 0.0) {
    const double eps = params.epsilon();
    // 1 - S_{n0+3}/S_{n0+2} = -expm1(-eps^2*(1+eps)^{n0+2}/P)
    const double one_minus_ratio =
        -std::expm1(-eps * eps * std::pow(1.0 + eps, n0 + 2) / params.snr_linear);
    tail += s2 / one_minus_ratio;
  }
  return KMean{mean, tail};
}

double sum_rate_closed_form(const SystemParams& params) {
  params.validate();
  const int m_users = params.num_secondary;
  double cum_feasible = 0.0;  // C_n = sum_{k<=n} exp(-P_k/P)
  double total = 0.0;
  for (int n = 1; n < m_users; ++n) {
    cum_feasible += level_feasible_prob(params, n);
    total += (k_exceedance(params, n) - k_exceedance(params, n + 1)) * cum_feasible;
  }
  cum_feasible += level_feasible_prob(params, m_users);
  total += k_exceedance(params, m_users) * cum_feasible;
  return params.rate_bpcu * total;
}

PhiVector phi_vector(const SystemParams& params) {
  params.validate();
  const int frames = params.frames_per_super_frame();
  std::vector<double> values(static_cast<std::size_t>(frames) + 1, 0.0);
  values[1] = std::exp(-params.epsilon() / params.snr_linear);
  for (int m = 2; m <= frames; ++m) {
    const int level = params.num_secondary - m + 2;
    values[static_cast<std::size_t>(m)] =
        k_exceedance(params, level) * level_feasible_prob(params, level);
  }
  return PhiVector(std::move(values));
}

double psi(const PhiVector& phi, int m, int n) {
  if (m < 1 || n > phi.frames()) {
    throw std::invalid_argument("psi: index range must satisfy 1 <= m, n <= M+1");
  }
  double product = 1.0;
  for (int p = m; p <= n; ++p) product *= 1.0 - phi[p];
  return product;
}

const char* to_string(AoiConvention convention) {
  return convention == AoiConvention::ratio ? "paper" : "trapezoid";
}

double aoi_tdma(const SystemParams& params, AoiConvention convention) {
  params.validate();
  const double cycle =
      params.frames_per_super_frame() * params.frame_seconds();
  double ratio_term =
      cycle * (2.0 * std::exp(params.epsilon() / params.snr_linear) - 1.0);
  if (convention == AoiConvention::trapezoid) ratio_term /= 2.0;
  return params.slot_seconds + ratio_term;
}

AoiClosedForm aoi_crnoma(const SystemParams& params, AoiConvention convention) {
  const PhiVector phi = phi_vector(params);
  const int frames = phi.frames();

  // head[n] = psi_1^n (failures in frames 1..n), head[0] = 1
  // tail[m] = psi_m^{M+1} (failures in frames m..M+1), tail[M+2] = 1
  std::vector<double> head(static_cast<std::size_t>(frames) + 1);
  head[0] = 1.0;
  for (int n = 1; n <= frames; ++n) {
    head[static_cast<std::size_t>(n)] =
        head[static_cast<std::size_t>(n - 1)] * (1.0 - phi[n]);
  }
  std::vector<double> tail(static_cast<std::size_t>(frames) + 2);
  tail[static_cast<std::size_t>(frames) + 1] = 1.0;
  for (int m = frames; m >= 1; --m) {
    tail[static_cast<std::size_t>(m)] =
        (1.0 - phi[m]) * tail[static_cast<std::size_t>(m + 1)];
  }

  const double ratio = head[static_cast<std::size_t>(frames)];  // idle super-frame
  if (ratio >= 1.0) {
    // Cannot happen for a positive success probability; in practice it means
    // every phi underflowed to zero and the average age diverges.
    throw std::domain_error(
        "aoi_crnoma: q-series ratio >= 1 at snr_linear=" +
        std::to_string(params.snr_linear) +
        " (success probabilities underflow, average age diverges)");
  }
  const double geo0 = 1.0 / (1.0 - ratio);            // sum r^q
  const double geo1 = geo0 * geo0;                    // sum (q+1) r^q
  const double geo2 = (1.0 + ratio) * geo1 * geo0;    // sum (q+1)^2 r^q

  const double span = frames;  // super-frame length in frames
  double delta_y = 0.0;
  double delta_y2 = 0.0;
  for (int m = 1; m <= frames; ++m) {
    for (int n = 1; n <= frames; ++n) {
      const double weight = phi[m] * phi[n] *
                            tail[static_cast<std::size_t>(m + 1)] *
                            head[static_cast<std::size_t>(n - 1)];
      const double offset = n - m;
      delta_y += weight * (span * geo1 + offset * geo0);
      delta_y2 += weight * (span * span * geo2 + 2.0 * span * offset * geo1 +
                            offset * offset * geo0);
    }
  }
  // Both successes inside the same super-frame.
  for (int m = 1; m < frames; ++m) {
    double run = 1.0;  // psi_{m+1}^{n-1}
    for (int n = m + 1; n <= frames; ++n) {
      const double weight = phi[m] * phi[n] * run;
      const double gap = n - m;
      delta_y += weight * gap;
      delta_y2 += weight * gap * gap;
      run *= 1.0 - phi[n];
    }
  }

  const double frame_sec = params.frame_seconds();
  delta_y *= frame_sec;
  delta_y2 *= frame_sec * frame_sec;
  if (!(delta_y > 0.0)) {
    throw std::domain_error(
        "aoi_crnoma: success probabilities underflow to zero at snr_linear=" +
        std::to_string(params.snr_linear));
  }

  AoiClosedForm out;
  out.convention = convention;
  out.delta_y = delta_y;
  out.delta_y2 = delta_y2;
  const double divisor =
      convention == AoiConvention::ratio ? delta_y : 2.0 * delta_y;
  out.value_seconds = params.slot_seconds + delta_y2 / divisor;
  return out;
}

}  // namespace crnoma
