#pragma once

#include "adara/mobility.hpp"
#include "adara/types.hpp"

namespace adara {

/// Idealized unit-disk medium: no collisions, a fixed delay plus a jitter
/// drawn once per transmission, and optional independent per-receiver loss.
struct RadioModel {
  double range = 250.0;
  SimTime propDelay = 0.001;
  SimTime jitter = 0.010;
  double lossProb = 0.0;

  /// Throws std::invalid_argument unless range > 0, delays >= 0 and
  /// 0 <= lossProb < 1.
  void validate() const;
  /// The boundary itself is in range.
  bool inRange(Vec2 a, Vec2 b) const { return distance(a, b) <= range; }
};

}  // namespace adara
