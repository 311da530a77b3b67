#include "adara/mobility.hpp"

#include <cmath>

namespace adara {

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Vec2 MobilityState::positionAt(SimTime t) const {
  if (t <= pauseUntil || speed <= 0.0) return position;
  if (t >= arriveAt) return waypoint;
  const double total = distance(position, waypoint);
  if (total <= 0.0) return waypoint;
  const double frac = (t - pauseUntil) * speed / total;
  return {position.x + (waypoint.x - position.x) * frac,
          position.y + (waypoint.y - position.y) * frac};
}

namespace {

Vec2 randomPoint(const Area& area, Rng& rng) {
  const double x = rng.uniform(0.0, area.width);
  const double y = rng.uniform(0.0, area.height);
  return {x, y};
}

MobilityState newLeg(Vec2 from, SimTime departAt, const WaypointParams& params, Rng& rng) {
  MobilityState s;
  s.position = from;
  s.pauseUntil = departAt;
  if (params.vMax <= 0.0) {
    s.waypoint = from;
    return s;
  }
  s.waypoint = randomPoint(params.area, rng);
  s.speed = params.vMax * (1.0 - rng.uniform01());
  s.arriveAt = departAt + distance(from, s.waypoint) / s.speed;
  return s;
}

}  // namespace

MobilityState initialMobility(const WaypointParams& params, Rng& rng, SimTime start) {
  return newLeg(randomPoint(params.area, rng), start, params, rng);
}

MobilityState staticMobility(Vec2 position) {
  MobilityState s;
  s.position = position;
  s.waypoint = position;
  return s;
}

MobilityState stepMobility(const MobilityState& state, SimTime now, const WaypointParams& params,
                           Rng& rng) {
  if (!state.moving() || now < state.arriveAt) return state;
  return newLeg(state.waypoint, now + params.pause, params, rng);
}

}  // namespace adara
