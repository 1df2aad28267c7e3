#pragma once

#include <array>

#include "ecobatch/core.hpp"

namespace ecobatch {

/// VT-micro coefficient table. k[i][j] multiplies v^i * a^j in the exponent
/// of the instantaneous fuel rate.
struct VtMicroCoefficients {
  std::array<std::array<double, 4>, 4> k{};

  /// The published passenger-car table.
  static VtMicroCoefficients standard();

  bool operator==(const VtMicroCoefficients&) const = default;
  void validate() const;
};

/// Instantaneous fuel rate exp(sum_ij k[i][j] v^i a^j). Strictly positive.
double fuel_rate(double v, double a, const VtMicroCoefficients& coeffs);

/// Fuel consumed over one interval of length theta at constant (v, a).
double interval_fuel(double v, double a, double theta,
                     const VtMicroCoefficients& coeffs);

/// Total fuel of a trajectory from its start up to (excluding) the departure
/// tick; independent of start_tick. Trajectories that never reach the stop
/// line are accounted over every stored interval with a defined acceleration.
double trajectory_fuel(const Trajectory& traj, const VtMicroCoefficients& coeffs);

}  // namespace ecobatch
