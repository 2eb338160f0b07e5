#include "mrsearch/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mrsearch/error.hpp"

namespace mrsearch {

namespace {

constexpr int kBracketSamples = 1000;
constexpr double kRootTol = 1e-10;
constexpr double kLimitSlack = 1e-9;

double velocity(const TrajectorySegment& s, double t) {
  return ((s.alpha / 24.0 * t + s.kappa / 6.0) * t + s.eta / 2.0) * t * t + s.a0 * t + s.v0;
}
double acceleration(const TrajectorySegment& s, double t) {
  return ((s.alpha / 6.0 * t + s.kappa / 2.0) * t + s.eta) * t + s.a0;
}
double jerk(const TrajectorySegment& s, double t) { return (s.alpha / 2.0 * t + s.kappa) * t + s.eta; }

// Largest |f| over [0,T] where `df` is the derivative of `f`: endpoints plus
// every sign change of df found on a uniform bracket and refined by bisection.
template <class F, class DF>
double peak_abs(F f, DF df, double T) {
  double worst = std::max(std::abs(f(0.0)), std::abs(f(T)));
  double t_prev = 0.0;
  double d_prev = df(0.0);
  for (int i = 1; i <= kBracketSamples; ++i) {
    const double t = T * i / kBracketSamples;
    const double d = df(t);
    if (d == 0.0) {
      worst = std::max(worst, std::abs(f(t)));
    } else if ((d_prev < 0.0) != (d < 0.0) && d_prev != 0.0) {
      double lo = t_prev, hi = t;
      double f_lo = d_prev;
      while (hi - lo > kRootTol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = df(mid);
        if ((fm < 0.0) == (f_lo < 0.0)) {
          lo = mid;
          f_lo = fm;
        } else {
          hi = mid;
        }
      }
      worst = std::max(worst, std::abs(f(0.5 * (lo + hi))));
    }
    t_prev = t;
    d_prev = d;
  }
  return worst;
}

}  // namespace

TrajectorySegment solve_quintic(const AxisBoundary& b) {
  if (!(b.T > 0.0) || !std::isfinite(b.T)) throw Error(ErrorCode::NonPositiveHorizon, "T must be > 0");
  const double T = b.T;
  const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;
  const double dp = b.pf - b.p0 - b.v0 * T - 0.5 * b.a0 * T2;
  const double dv = b.vf - b.v0 - b.a0 * T;
  const double da = b.af - b.a0;

  TrajectorySegment s;
  s.alpha = (720.0 * dp - 360.0 * T * dv + 60.0 * T2 * da) / T5;
  s.kappa = (-360.0 * T * dp + 168.0 * T2 * dv - 24.0 * T3 * da) / T5;
  s.eta = (60.0 * T2 * dp - 24.0 * T3 * dv + 3.0 * T4 * da) / T5;
  s.a0 = b.a0;
  s.v0 = b.v0;
  s.p0 = b.p0;
  s.T = T;
  return s;
}

AxisState eval(const TrajectorySegment& seg, double t) {
  if (!(t >= 0.0 && t <= seg.T)) throw Error(ErrorCode::OutOfHorizon, "t outside [0, T]");
  AxisState st;
  st.position = ((((seg.alpha / 120.0 * t + seg.kappa / 24.0) * t + seg.eta / 6.0) * t + seg.a0 / 2.0) * t + seg.v0) * t + seg.p0;
  st.velocity = velocity(seg, t);
  st.acceleration = acceleration(seg, t);
  st.jerk = jerk(seg, t);
  return st;
}

LimitReport check_limits(const TrajectorySegment& seg, double v_max, double a_max) {
  LimitReport r;
  r.worst_v = peak_abs([&](double t) { return velocity(seg, t); },
                       [&](double t) { return acceleration(seg, t); }, seg.T);
  r.worst_a = peak_abs([&](double t) { return acceleration(seg, t); },
                       [&](double t) { return jerk(seg, t); }, seg.T);
  r.feasible = r.worst_v <= v_max * (1.0 + kLimitSlack) && r.worst_a <= a_max * (1.0 + kLimitSlack);
  return r;
}

TrajectorySegment rescale_time(const AxisBoundary& b, double v_max, double a_max) {
  if (std::abs(b.v0) > v_max || std::abs(b.vf) > v_max || std::abs(b.a0) > a_max || std::abs(b.af) > a_max)
    throw Error(ErrorCode::Unreachable, "boundary state exceeds kinematic limits");

  AxisBoundary trial = b;
  auto seg = solve_quintic(trial);
  if (check_limits(seg, v_max, a_max).feasible) return seg;

  double lo = trial.T;
  for (int i = 0; i < 64; ++i) {
    trial.T *= 2.0;
    seg = solve_quintic(trial);
    if (check_limits(seg, v_max, a_max).feasible) break;
    lo = trial.T;
    if (i == 63) throw Error(ErrorCode::Unreachable, "no feasible horizon found");
  }
  double hi = trial.T;
  auto best = seg;
  while ((hi - lo) > 0.01 * hi) {
    trial.T = 0.5 * (lo + hi);
    auto mid = solve_quintic(trial);
    if (check_limits(mid, v_max, a_max).feasible) {
      hi = trial.T;
      best = mid;
    } else {
      lo = trial.T;
    }
  }
  return best;
}

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

}  // namespace mrsearch
