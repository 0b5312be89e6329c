#pragma once

#include <optional>
#include <vector>

#include "weldarm/collision.hpp"
#include "weldarm/errors.hpp"
#include "weldarm/ik.hpp"
#include "weldarm/kinematics.hpp"
#include "weldarm/model.hpp"

namespace weldarm {

// One target on the weld circle: the tip rides radius + standoff around the
// pipe center and the electrode axis points radially inward (phi = psi + pi).
struct WeldPathSample {
  double t = 0.0;    // s
  double psi = 0.0;  // rad, weld angle from base +x, counterclockwise
  PlanarPose target;
};

// Uniform sweep over one revolution, endpoint excluded: psi_k = 2 pi k / n,
// t_k = k period / n, constant tangential speed 2 pi (r + s) / period.
inline std::vector<WeldPathSample> weld_path(const PipeSpec& pipe, const SimConfig& cfg) {
  const int n = cfg.sample_count;
  const double rr = pipe.radius + pipe.standoff;
  std::vector<WeldPathSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    WeldPathSample s;
    s.psi = kTwoPi * static_cast<double>(k) / n;
    s.t = cfg.revolution_period * static_cast<double>(k) / n;
    s.target.x = pipe.center.x() + rr * std::cos(s.psi);
    s.target.z = pipe.center.y() + rr * std::sin(s.psi);
    s.target.phi = norm_angle(s.psi + kPi);
    out.push_back(s);
  }
  return out;
}

struct PlannedSample {
  WeldPathSample path;
  JointVector q;  // unwrapped: consecutive samples differ by < pi per joint
};

// Full joint-space trajectory for one weld revolution. Per sample, in order:
// redundancy_select seeded with the previous solution, solve_ik, collision
// check. Angles are unwrapped against the previous sample and the per-joint
// step is checked against cfg.tol.continuity_max_step. The elbow branch is
// cfg.branch throughout. Errors name the first offending sample.
inline std::vector<PlannedSample> plan_trajectory(const RobotModel& model, const PipeSpec& pipe,
                                                  const SimConfig& cfg) {
  const std::vector<WeldPathSample> path = weld_path(pipe, cfg);
  std::vector<PlannedSample> out;
  out.reserve(path.size());
  std::optional<JointVector> prev;
  for (std::size_t k = 0; k < path.size(); ++k) {
    RedundancyChoice choice;
    try {
      choice = redundancy_select(model, path[k].target, pipe, prev, cfg);
    } catch (const NoFeasibleRedundancy&) {
      throw NoFeasibleRedundancy(k);
    }
    IkSolution sol;
    try {
      sol = solve_ik(model, path[k].target, choice.theta2, choice.theta3, choice.branch,
                     cfg.tol.reach_eps);
    } catch (const Unreachable&) {
      throw Unreachable(k, "target out of reach at sample " + std::to_string(k));
    }
    if (check_collision(model, sol.q, pipe, cfg.tol.penetration_eps)) throw CollisionAtSample(k);

    JointVector q = sol.q;
    if (prev) {
      for (std::size_t j = 0; j < JointVector::size(); ++j) {
        q[j] = unwrap_near(q[j], (*prev)[j]);
        const double step = std::abs(q[j] - (*prev)[j]);
        if (step > cfg.tol.continuity_max_step)
          throw ContinuityViolation(static_cast<int>(j) + 2, k, step);
      }
    }
    out.push_back({path[k], q});
    prev = q;
  }
  return out;
}

}  // namespace weldarm
