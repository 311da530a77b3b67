#include "adara/traffic.hpp"

#include <cmath>

namespace adara {

std::uint64_t OnOffFlow::packetsPerOnPeriod() const {
  return static_cast<std::uint64_t>(std::floor(onTime * rate + 1e-9));
}

std::optional<SimTime> OnOffFlow::emissionTime(std::uint64_t k) const {
  const std::uint64_t perOn = packetsPerOnPeriod();
  if (perOn == 0) return std::nullopt;
  const SimTime t = start + static_cast<double>(k / perOn) * (onTime + offTime) +
                    static_cast<double>(k % perOn) / rate;
  if (t >= stop) return std::nullopt;
  return t;
}

std::vector<std::uint64_t> OnOffFlow::emissionsIn(SimTime from, SimTime to) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 0;; ++k) {
    auto t = emissionTime(k);
    if (!t || *t >= to) break;
    if (*t >= from) out.push_back(k);
  }
  return out;
}

}  // namespace adara
