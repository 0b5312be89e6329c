#pragma once

#include <vector>

#include "weldarm/dynamics.hpp"
#include "weldarm/errors.hpp"
#include "weldarm/pathplan.hpp"

namespace weldarm {

// One row of the simulator output: kinematic state plus per-joint loads.
struct TrajectorySample {
  double t = 0.0;
  double psi = 0.0;
  JointVector q, qdot, qddot;
  std::array<double, RobotModel::kJoints> fx{}, fz{}, tau{};
};

struct Derivatives {
  std::vector<JointVector> qdot;
  std::vector<JointVector> qddot;
};

// Periodic central differences on an unwrapped angle sequence covering one
// revolution. The seam is closed by the per-joint whole-turn offset between
// the last and first sample, so a joint that winds during the sweep
// differentiates cleanly across the wrap.
inline Derivatives differentiate_trajectory(const std::vector<JointVector>& q, double dt) {
  const std::size_t n = q.size();
  if (n < 4) throw TooFewSamples(n);

  JointVector turn{};  // q[n] - q[0], a whole number of turns per joint
  for (std::size_t j = 0; j < JointVector::size(); ++j)
    turn[j] = kTwoPi * std::round((q[n - 1][j] - q[0][j]) / kTwoPi);

  Derivatives d;
  d.qdot.resize(n);
  d.qddot.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < JointVector::size(); ++j) {
      const double prev = k == 0 ? q[n - 1][j] - turn[j] : q[k - 1][j];
      const double next = k + 1 == n ? q[0][j] + turn[j] : q[k + 1][j];
      d.qdot[k][j] = (next - prev) / (2.0 * dt);
      d.qddot[k][j] = (next - 2.0 * q[k][j] + prev) / (dt * dt);
    }
  }
  return d;
}

// plan -> differentiate -> per-sample inverse dynamics.
inline std::vector<TrajectorySample> run_simulation(const RobotModel& model, const PipeSpec& pipe,
                                                    const SimConfig& cfg) {
  const std::vector<PlannedSample> plan = plan_trajectory(model, pipe, cfg);
  std::vector<JointVector> qs;
  qs.reserve(plan.size());
  for (const PlannedSample& s : plan) qs.push_back(s.q);
  const double dt = cfg.revolution_period / cfg.sample_count;
  const Derivatives d = differentiate_trajectory(qs, dt);

  std::vector<TrajectorySample> out;
  out.reserve(plan.size());
  for (std::size_t k = 0; k < plan.size(); ++k) {
    TrajectorySample s;
    s.t = plan[k].path.t;
    s.psi = plan[k].path.psi;
    s.q = plan[k].q;
    s.qdot = d.qdot[k];
    s.qddot = d.qddot[k];
    const DynamicsResult dyn = inverse_dynamics(model, s.q, s.qdot, s.qddot);
    for (std::size_t j = 0; j < RobotModel::kJoints; ++j) {
      s.fx[j] = dyn.joints[j].fx;
      s.fz[j] = dyn.joints[j].fz;
      s.tau[j] = dyn.joints[j].tau;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace weldarm
