#pragma once

#include <cmath>
#include <optional>

#include "weldarm/collision.hpp"
#include "weldarm/errors.hpp"
#include "weldarm/kinematics.hpp"
#include "weldarm/model.hpp"

namespace weldarm {

// Intermediates of the closed-form solution, kept for diagnostics and tests.
// (A, B) is the planar vector the (L4, L5) subchain must span once the fixed
// tool offset and the held links 2-3 are subtracted from the target.
struct IkIntermediates {
  double A = 0.0, B = 0.0;     // m
  double K = 0.0;              // m^2, A^2 + B^2
  double C5 = 0.0, S5 = 0.0;
  double S234 = 0.0, C234 = 0.0;
  double theta_sum = 0.0;      // rad, = target.phi
  bool near_singular = false;  // |S5| < 1e-6: subchain stretched or folded
};

struct IkSolution {
  JointVector q;
  IkIntermediates mid;
};

// Closed-form IK of the planar 5R chain for a tip pose, with theta2/theta3
// held as the free redundancy parameters. theta5 comes from the two-link law
// of cosines on (L4, L5); the elbow branch picks the sign of S5.
inline IkSolution solve_ik(const RobotModel& model, const PlanarPose& target, double theta2,
                           double theta3, Branch branch, double reach_eps = 1e-9) {
  const double L1 = model.length(1), L2 = model.length(2), L3 = model.length(3);
  const double L4 = model.length(4), L5 = model.length(5), L6 = model.length(6);

  IkIntermediates mid;
  mid.theta_sum = target.phi;
  mid.A = target.x - L6 * std::cos(target.phi) - L3 * std::cos(theta2 + theta3) -
          L2 * std::cos(theta2);
  mid.B = target.z - L1 - L6 * std::sin(target.phi) - L3 * std::sin(theta2 + theta3) -
          L2 * std::sin(theta2);
  mid.K = mid.A * mid.A + mid.B * mid.B;

  double c5 = (mid.K - L4 * L4 - L5 * L5) / (2.0 * L4 * L5);
  if (std::abs(c5) > 1.0 + reach_eps) throw Unreachable();
  c5 = std::clamp(c5, -1.0, 1.0);
  const double s5 = (branch == Branch::elbow_up ? 1.0 : -1.0) * std::sqrt(1.0 - c5 * c5);
  mid.C5 = c5;
  mid.S5 = s5;
  mid.near_singular = std::abs(s5) < 1e-6;

  const double theta5 = std::atan2(s5, c5);
  const double theta234 = std::atan2(mid.B, mid.A) - std::atan2(L5 * s5, L4 + L5 * c5);
  mid.S234 = std::sin(theta234);
  mid.C234 = std::cos(theta234);

  IkSolution sol;
  sol.q[0] = theta2;
  sol.q[1] = theta3;
  sol.q[2] = norm_angle(theta234 - theta3 - theta2);
  sol.q[3] = norm_angle(theta5);
  sol.q[4] = norm_angle(target.phi - theta5 - theta234);
  sol.mid = mid;
  return sol;
}

struct RedundancyChoice {
  double theta2 = 0.0;
  double theta3 = 0.0;
  Branch branch = Branch::elbow_up;
};

// Picks the free parameters (theta2, theta3) for one target.
//
// hold: the configured values, unconditionally.
// grid_search: scans the configured grid, keeps candidates whose IK succeeds
// and whose full pose clears the pipe, and returns the one minimizing the
// L1 joint-space distance to `previous` (to the held values when there is no
// previous sample). Ties break toward the lexicographically smallest
// (theta2, theta3), which the ascending scan gives for free.
inline RedundancyChoice redundancy_select(const RobotModel& model, const PlanarPose& target,
                                          const PipeSpec& pipe,
                                          const std::optional<JointVector>& previous,
                                          const SimConfig& cfg) {
  if (cfg.redundancy == RedundancyStrategy::hold)
    return {cfg.theta2_held, cfg.theta3_held, cfg.branch};

  const GridSpec& g = cfg.grid;
  auto grid_value = [](double lo, double hi, int steps, int i) {
    return steps <= 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
  };

  bool found = false;
  RedundancyChoice best;
  double best_score = 0.0;
  for (int i2 = 0; i2 < g.steps2; ++i2) {
    const double t2 = grid_value(g.theta2_min, g.theta2_max, g.steps2, i2);
    for (int i3 = 0; i3 < g.steps3; ++i3) {
      const double t3 = grid_value(g.theta3_min, g.theta3_max, g.steps3, i3);
      IkSolution sol;
      try {
        sol = solve_ik(model, target, t2, t3, cfg.branch, cfg.tol.reach_eps);
      } catch (const Unreachable&) {
        continue;
      }
      if (check_collision(model, sol.q, pipe, cfg.tol.penetration_eps)) continue;
      double score = 0.0;
      if (previous) {
        for (std::size_t j = 0; j < JointVector::size(); ++j)
          score += std::abs(unwrap_near(sol.q[j], (*previous)[j]) - (*previous)[j]);
      } else {
        score = std::abs(t2 - cfg.theta2_held) + std::abs(t3 - cfg.theta3_held);
      }
      if (!found || score < best_score) {
        found = true;
        best_score = score;
        best = {t2, t3, cfg.branch};
      }
    }
  }
  if (!found) throw NoFeasibleRedundancy();
  return best;
}

}  // namespace weldarm
