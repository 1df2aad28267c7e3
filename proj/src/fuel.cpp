#include "ecobatch/fuel.hpp"

#include <cmath>
#include <stdexcept>

namespace ecobatch {

VtMicroCoefficients VtMicroCoefficients::standard() {
  VtMicroCoefficients c;
  // k[i][j]: i = speed power, j = acceleration power.
  c.k[0] = {-7.537, 0.4438, 0.1716, -0.0420};
  c.k[1] = {0.0973, 0.0518, 0.0029, -0.0071};
  c.k[2] = {-0.003, -7.42e-4, 1.09e-4, 1.16e-4};
  c.k[3] = {5.3e-5, 6e-6, -1e-5, -6e-6};
  return c;
}

void VtMicroCoefficients::validate() const {
  for (const auto& row : k)
    for (double v : row)
      if (!std::isfinite(v))
        throw std::invalid_argument("coefficients: all 16 entries must be finite");
}

double fuel_rate(double v, double a, const VtMicroCoefficients& coeffs) {
  double exponent = 0.0;
  double vi = 1.0;
  for (int i = 0; i < 4; ++i) {
    double aj = 1.0;
    for (int j = 0; j < 4; ++j) {
      exponent += coeffs.k[i][j] * vi * aj;
      aj *= a;
    }
    vi *= v;
  }
  return std::exp(exponent);
}

double interval_fuel(double v, double a, double theta,
                     const VtMicroCoefficients& coeffs) {
  return fuel_rate(v, a, coeffs) * theta;
}

double trajectory_fuel(const Trajectory& traj,
                       const VtMicroCoefficients& coeffs) {
  // Accounted intervals: from the start up to the tick before departure.
  long count = traj.size() - 1;
  if (traj.travel_ticks()) count = *traj.travel_ticks();
  if (count > traj.size() - 2) count = traj.size() - 2;
  // Summed tail-to-head so the total telescopes exactly against the
  // cost-to-go recursion used by the batch solver.
  double total = 0.0;
  for (long i = count - 1; i >= 0; --i) {
    const double v = traj.speed(i);
    const double a = (traj.speed(i + 1) - v) / traj.theta();
    total += interval_fuel(v, a, traj.theta(), coeffs);
  }
  return total;
}

}  // namespace ecobatch
