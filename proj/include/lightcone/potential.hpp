#pragma once

#include <span>
#include <variant>
#include <vector>

#include "lightcone/geometry.hpp"
#include "lightcone/grid.hpp"

namespace lightcone {

// Closed-form time-dependent potential families. Every family evaluates
// to a real field on any grid at any time.
struct ZeroPotential {};
// amplitude * exp(-|x - center|^2 / width^2)
struct StaticBump {
  double amplitude = 0.0;
  geom::Vec center;
  double width = 1.0;
};
// bump with center + velocity * t
struct MovingBump {
  double amplitude = 0.0;
  geom::Vec center;
  double width = 1.0;
  geom::Vec velocity;
};
// static bump profile scaled by cos(omega * t)
struct OscillatingBump {
  double amplitude = 0.0;
  geom::Vec center;
  double width = 1.0;
  double omega = 0.0;
};
struct PotentialSpec;
struct SumPotential {
  std::vector<PotentialSpec> terms;
};

struct PotentialSpec {
  std::variant<ZeroPotential, StaticBump, MovingBump, OscillatingBump, SumPotential> node;
};

void validate(const PotentialSpec& spec, int dim);
bool is_static(const PotentialSpec& spec);
bool is_zero(const PotentialSpec& spec);

// Overwrites out with V(x, t) at every cell center.
void evaluate_potential(const PotentialSpec& spec, const Grid& g, double t, std::span<double> out);

}  // namespace lightcone
