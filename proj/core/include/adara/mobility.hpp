#pragma once

#include "adara/rng.hpp"
#include "adara/types.hpp"

namespace adara {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(Vec2 a, Vec2 b);

struct Area {
  double width = 300.0;
  double height = 1000.0;
  bool contains(Vec2 p) const { return p.x >= 0 && p.x <= width && p.y >= 0 && p.y <= height; }
};

struct WaypointParams {
  Area area;
  double vMax = 0.0;
  SimTime pause = 0.0;
};

/// One random-waypoint leg: the node waits at `position` until `pauseUntil`,
/// then moves in a straight line to `waypoint` at `speed`.
struct MobilityState {
  Vec2 position;
  Vec2 waypoint;
  double speed = 0.0;
  SimTime pauseUntil = 0.0;
  SimTime arriveAt = kForever;

  Vec2 positionAt(SimTime t) const;
  bool moving() const { return arriveAt != kForever; }
};

/// Uniform start position; the first leg departs at `start` without a pause.
/// With vMax = 0 the node never moves.
MobilityState initialMobility(const WaypointParams& params, Rng& rng, SimTime start = 0.0);

/// Starts a static node at a fixed position.
MobilityState staticMobility(Vec2 position);

/// Called on arrival: the node pauses, then heads to a fresh uniform
/// waypoint at a speed drawn from (0, vMax].
MobilityState stepMobility(const MobilityState& state, SimTime now, const WaypointParams& params,
                           Rng& rng);

}  // namespace adara
