#include "adara/radio.hpp"

#include <stdexcept>

namespace adara {

void RadioModel::validate() const {
  if (!(range > 0.0)) throw std::invalid_argument("radio range must be positive");
  if (!(propDelay >= 0.0)) throw std::invalid_argument("propagation delay must be non-negative");
  if (!(jitter >= 0.0)) throw std::invalid_argument("jitter must be non-negative");
  if (!(lossProb >= 0.0 && lossProb < 1.0)) {
    throw std::invalid_argument("loss probability must be in [0, 1)");
  }
}

}  // namespace adara
