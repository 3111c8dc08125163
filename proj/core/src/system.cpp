#include "crnoma/system.hpp"

#include <stdexcept>
#include <string>

namespace crnoma {

void SystemParams::validate() const {
  if (!(rate_bpcu > 0.0) || !std::isfinite(rate_bpcu)) {
    throw std::invalid_argument("rate_bpcu: must be a positive finite number");
  }
  if (!(snr_linear > 0.0) || !std::isfinite(snr_linear)) {
    throw std::invalid_argument("snr_linear: must be a positive finite number");
  }
  if (num_secondary < 1) {
    throw std::invalid_argument("num_secondary: must be >= 1");
  }
  if (slots_per_frame < 1) {
    throw std::invalid_argument("slots_per_frame: must be >= 1");
  }
  if (!(slot_seconds > 0.0) || !std::isfinite(slot_seconds)) {
    throw std::invalid_argument("slot_seconds: must be a positive finite number");
  }
}

}  // namespace crnoma
