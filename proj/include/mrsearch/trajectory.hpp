#pragma once

namespace mrsearch {

/// Boundary conditions for one axis over [0, T].
struct AxisBoundary {
  double p0 = 0.0, v0 = 0.0, a0 = 0.0;
  double pf = 0.0, vf = 0.0, af = 0.0;
  double T = 1.0;
};

/// s(t) = alpha/120 t^5 + kappa/24 t^4 + eta/6 t^3 + a0/2 t^2 + v0 t + p0
struct TrajectorySegment {
  double alpha = 0.0;
  double kappa = 0.0;
  double eta = 0.0;
  double a0 = 0.0;
  double v0 = 0.0;
  double p0 = 0.0;
  double T = 0.0;
};

struct AxisState {
  double position = 0.0;
  double velocity = 0.0;
  double acceleration = 0.0;
  double jerk = 0.0;
};

struct LimitReport {
  bool feasible = true;
  double worst_v = 0.0;
  double worst_a = 0.0;
};

/// Minimum-jerk closed form. Throws NonPositiveHorizon unless T > 0.
TrajectorySegment solve_quintic(const AxisBoundary& b);

/// Throws OutOfHorizon outside [0, T].
AxisState eval(const TrajectorySegment& seg, double t);

/// Peak |velocity| and |acceleration| over [0, T] from the critical points of
/// each derivative plus the endpoints.
LimitReport check_limits(const TrajectorySegment& seg, double v_max, double a_max);

/// Returns a feasible segment: keeps b.T if already feasible, otherwise
/// doubles T until feasible and bisects down to within 1% of the minimal
/// feasible horizon. Throws Unreachable if the boundary values themselves
/// break the limits.
TrajectorySegment rescale_time(const AxisBoundary& b, double v_max, double a_max);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

}  // namespace mrsearch
