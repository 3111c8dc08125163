#include "crnoma/ladder.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace crnoma {

double interference_budget(const SystemParams& params, ChannelGain h0) {
  return params.snr_linear * h0.power_gain / params.epsilon() - 1.0;
}

int max_safe_kmax(double epsilon) {
  const double limit =
      std::log(std::numeric_limits<double>::max()) / std::log1p(epsilon);
  int k = static_cast<int>(limit);
  while (k > 1 && !std::isfinite(std::pow(1.0 + epsilon, k))) --k;
  return k;
}

SnrLadder build_ladder(const SystemParams& params, int kmax) {
  params.validate();
  if (kmax < 1) {
    throw std::invalid_argument("build_ladder: kmax must be >= 1");
  }
  const double eps = params.epsilon();
  const int safe = max_safe_kmax(eps);
  if (kmax > safe) {
    throw std::domain_error("build_ladder: kmax " + std::to_string(kmax) +
                            " overflows the double range; largest safe kmax is " +
                            std::to_string(safe));
  }

  SnrLadder out;
  out.epsilon_ = eps;
  out.levels_.reserve(static_cast<std::size_t>(kmax));
  out.prefix_.reserve(static_cast<std::size_t>(kmax));

  // The recursion is carried in extended precision so the stored doubles
  // stay within a couple of ulp of the exact values out to k ~ 50.
  const long double eps_l = eps;
  long double eta = 0.0L;
  for (int k = 1; k <= kmax; ++k) {
    const long double lvl = (k == 1) ? eps_l : eps_l * (1.0L + eta);
    eta += lvl;
    out.levels_.push_back(static_cast<double>(lvl));
    out.prefix_.push_back(static_cast<double>(eta));
  }
  return out;
}

double closed_form_level(double epsilon, int k) {
  return epsilon * std::pow(1.0 + epsilon, k - 1);
}

double eta_closed_form(double epsilon, int n) {
  return n == 0 ? 0.0 : std::pow(1.0 + epsilon, n) - 1.0;
}

int supported_levels_from_budget(double epsilon, double budget) {
  // eta_1 == epsilon exactly; anything below it (including negative
  // budgets) supports no level.
  if (!(budget >= epsilon)) return 0;
  int k = static_cast<int>(std::floor(std::log1p(budget) / std::log1p(epsilon)));
  if (k < 1) k = 1;
  // The log estimate can land one off at eta boundaries; settle it with
  // exact comparisons.  Ties at eta_{k+1} include the extra level.
  while (eta_closed_form(epsilon, k + 1) <= budget) ++k;
  while (k > 1 && eta_closed_form(epsilon, k) > budget) --k;
  return k;
}

int supported_levels(const SystemParams& params, ChannelGain h0) {
  return supported_levels_from_budget(params.epsilon(),
                                      interference_budget(params, h0));
}

}  // namespace crnoma
