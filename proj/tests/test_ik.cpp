#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "weldarm/weldarm.hpp"

using namespace weldarm;

namespace {

PlanarPose tip_of(const RobotModel& m, const JointVector& q) {
  return forward_kinematics(m, q).tip;
}

}  // namespace

TEST_CASE("closed-form IK round-trips through forward kinematics") {
  const RobotModel m = oracles::paper_model();
  std::mt19937_64 rng(100);
  for (int i = 0; i < 1000; ++i) {
    const JointVector q = oracles::random_joints(rng);
    const PlanarPose target = tip_of(m, q);
    for (Branch b : {Branch::elbow_up, Branch::elbow_down}) {
      const IkSolution sol = solve_ik(m, target, q[0], q[1], b);
      const PlanarPose back = tip_of(m, sol.q);
      CHECK(std::abs(back.x - target.x) <= 1e-9);
      CHECK(std::abs(back.z - target.z) <= 1e-9);
      CHECK(std::abs(norm_angle(back.phi - target.phi)) <= 1e-9);
      // the branch matching the sign of theta5 recovers the original joints
      const bool same_branch = (q[3] >= 0) == (b == Branch::elbow_up);
      if (same_branch && std::abs(std::sin(q[3])) > 1e-9) {
        for (std::size_t j = 0; j < JointVector::size(); ++j)
          CHECK(std::abs(norm_angle(sol.q[j] - q[j])) <= 1e-9);
      }
    }
  }
}

TEST_CASE("targets beyond reach raise Unreachable") {
  const RobotModel m = oracles::paper_model();
  CHECK_THROWS_AS(solve_ik(m, PlanarPose{100.0, 0.0, 0.0}, 0.3, -0.6, Branch::elbow_up),
                  Unreachable);
}

TEST_CASE("full extension of the distal pair collapses both branches") {
  const RobotModel m = oracles::paper_model();
  JointVector q;
  q[0] = 0.4;
  q[1] = -0.2;
  q[2] = 0.3;
  q[3] = 0.0;  // stretched (L4, L5) subchain
  q[4] = -0.5;
  const PlanarPose target = tip_of(m, q);
  const IkSolution up = solve_ik(m, target, q[0], q[1], Branch::elbow_up);
  const IkSolution down = solve_ik(m, target, q[0], q[1], Branch::elbow_down);
  CHECK(up.mid.C5 >= 1.0 - 1e-12);
  CHECK(std::abs(up.q[3]) <= 1e-6);
  CHECK(up.mid.near_singular);
  for (std::size_t j = 0; j < JointVector::size(); ++j)
    CHECK(std::abs(up.q[j] - down.q[j]) <= 1e-9);
}

TEST_CASE("branch symmetry and intermediate identities") {
  const RobotModel m = oracles::paper_model();
  std::mt19937_64 rng(101);
  for (int i = 0; i < 300; ++i) {
    const JointVector q = oracles::random_joints(rng);
    const PlanarPose target = tip_of(m, q);
    const IkSolution up = solve_ik(m, target, q[0], q[1], Branch::elbow_up);
    const IkSolution down = solve_ik(m, target, q[0], q[1], Branch::elbow_down);

    CHECK(up.mid.A == down.mid.A);
    CHECK(up.mid.B == down.mid.B);
    CHECK(up.mid.C5 == down.mid.C5);
    CHECK(up.mid.S5 == -down.mid.S5);
    CHECK(up.mid.K == Catch::Approx(up.mid.A * up.mid.A + up.mid.B * up.mid.B).epsilon(1e-15));

    CHECK(std::abs(up.mid.C5 * up.mid.C5 + up.mid.S5 * up.mid.S5 - 1.0) <= 1e-12);
    CHECK(std::abs(up.mid.S234 * up.mid.S234 + up.mid.C234 * up.mid.C234 - 1.0) <= 1e-12);

    for (const IkSolution& sol : {up, down}) {
      double sum = 0.0;
      for (std::size_t j = 0; j < JointVector::size(); ++j) sum += sol.q[j];
      CHECK(std::abs(norm_angle(sum - target.phi)) <= 1e-12);
    }
  }
}

TEST_CASE("IK is deterministic") {
  const RobotModel m = oracles::paper_model();
  std::mt19937_64 rng(102);
  const JointVector q = oracles::random_joints(rng);
  const PlanarPose target = tip_of(m, q);
  const IkSolution a = solve_ik(m, target, q[0], q[1], Branch::elbow_up);
  const IkSolution b = solve_ik(m, target, q[0], q[1], Branch::elbow_up);
  CHECK(a.q == b.q);
}

TEST_CASE("redundancy hold returns the configured values verbatim") {
  const RobotModel m = oracles::paper_model();
  SimConfig cfg;
  cfg.redundancy = RedundancyStrategy::hold;
  cfg.theta2_held = 0.52;
  cfg.theta3_held = -1.05;
  cfg.branch = Branch::elbow_down;
  PipeSpec pipe{{7.0, 3.45}, 0.5, 0.0};
  const RedundancyChoice c =
      redundancy_select(m, PlanarPose{7.5, 3.45, kPi}, pipe, std::nullopt, cfg);
  CHECK(c.theta2 == 0.52);
  CHECK(c.theta3 == -1.05);
  CHECK(c.branch == Branch::elbow_down);
}

TEST_CASE("grid search dodges a colliding held posture") {
  const RobotModel m = oracles::paper_model();
  SimConfig cfg;
  cfg.redundancy = RedundancyStrategy::grid_search;
  cfg.theta2_held = deg_to_rad(30.0);
  cfg.theta3_held = deg_to_rad(-60.0);
  cfg.branch = Branch::elbow_up;
  cfg.grid = {deg_to_rad(20.0), deg_to_rad(40.0), deg_to_rad(-70.0), deg_to_rad(-50.0), 3, 3};

  // Reachable by construction, elbow-up at the held values.
  JointVector probe;
  probe[0] = cfg.theta2_held;
  probe[1] = cfg.theta3_held;
  probe[2] = deg_to_rad(40.0);
  probe[3] = deg_to_rad(80.0);
  probe[4] = deg_to_rad(-30.0);
  const PlanarPose target = tip_of(m, probe);

  // Park the pipe on link 4 of the held solution so the held cell collides.
  const IkSolution held =
      solve_ik(m, target, cfg.theta2_held, cfg.theta3_held, cfg.branch);
  const auto pts = joint_positions(m, held.q);
  PipeSpec pipe;
  pipe.center = 0.5 * (pts[2] + pts[3]);
  pipe.radius = 0.25;

  REQUIRE(check_collision(m, held.q, pipe, cfg.tol.penetration_eps));

  // Exhaustive oracle over the same grid with the same score.
  bool found = false;
  double best_score = 0.0, best_t2 = 0.0, best_t3 = 0.0;
  for (int i2 = 0; i2 < 3; ++i2) {
    const double t2 = cfg.grid.theta2_min + (cfg.grid.theta2_max - cfg.grid.theta2_min) * i2 / 2.0;
    for (int i3 = 0; i3 < 3; ++i3) {
      const double t3 =
          cfg.grid.theta3_min + (cfg.grid.theta3_max - cfg.grid.theta3_min) * i3 / 2.0;
      IkSolution sol;
      try {
        sol = solve_ik(m, target, t2, t3, cfg.branch);
      } catch (const Unreachable&) {
        continue;
      }
      if (check_collision(m, sol.q, pipe, cfg.tol.penetration_eps)) continue;
      const double score =
          std::abs(t2 - cfg.theta2_held) + std::abs(t3 - cfg.theta3_held);
      if (!found || score < best_score) {
        found = true;
        best_score = score;
        best_t2 = t2;
        best_t3 = t3;
      }
    }
  }
  REQUIRE(found);

  const RedundancyChoice c = redundancy_select(m, target, pipe, std::nullopt, cfg);
  CHECK(c.theta2 == best_t2);
  CHECK(c.theta3 == best_t3);
  const bool is_held = c.theta2 == cfg.theta2_held && c.theta3 == cfg.theta3_held;
  CHECK_FALSE(is_held);
}

TEST_CASE("grid search with previous sample minimizes the joint-space move") {
  const RobotModel m = oracles::paper_model();
  SimConfig cfg;
  cfg.redundancy = RedundancyStrategy::grid_search;
  cfg.branch = Branch::elbow_up;
  cfg.grid = {deg_to_rad(10.0), deg_to_rad(50.0), deg_to_rad(-80.0), deg_to_rad(-40.0), 5, 5};
  PipeSpec pipe{{-20.0, 3.45}, 0.5, 0.0};  // far away: no collisions in play

  JointVector probe;
  probe[0] = deg_to_rad(28.0);
  probe[1] = deg_to_rad(-61.0);
  probe[2] = deg_to_rad(35.0);
  probe[3] = deg_to_rad(75.0);
  probe[4] = deg_to_rad(-20.0);
  const PlanarPose target = tip_of(m, probe);
  const JointVector prev = probe;

  const RedundancyChoice c = redundancy_select(m, target, pipe, prev, cfg);

  double best_score = std::numeric_limits<double>::infinity();
  double best_t2 = 0.0, best_t3 = 0.0;
  for (int i2 = 0; i2 < 5; ++i2) {
    const double t2 = cfg.grid.theta2_min + (cfg.grid.theta2_max - cfg.grid.theta2_min) * i2 / 4.0;
    for (int i3 = 0; i3 < 5; ++i3) {
      const double t3 =
          cfg.grid.theta3_min + (cfg.grid.theta3_max - cfg.grid.theta3_min) * i3 / 4.0;
      IkSolution sol;
      try {
        sol = solve_ik(m, target, t2, t3, cfg.branch);
      } catch (const Unreachable&) {
        continue;
      }
      double score = 0.0;
      for (std::size_t j = 0; j < JointVector::size(); ++j)
        score += std::abs(unwrap_near(sol.q[j], prev[j]) - prev[j]);
      if (score < best_score) {
        best_score = score;
        best_t2 = t2;
        best_t3 = t3;
      }
    }
  }
  CHECK(c.theta2 == best_t2);
  CHECK(c.theta3 == best_t3);
}

TEST_CASE("grid search reports infeasibility beyond total reach") {
  const RobotModel m = oracles::paper_model();
  SimConfig cfg;
  cfg.redundancy = RedundancyStrategy::grid_search;
  PipeSpec pipe{{100.0, 3.45}, 0.5, 0.0};
  CHECK_THROWS_AS(
      redundancy_select(m, PlanarPose{100.5, 3.45, kPi}, pipe, std::nullopt, cfg),
      NoFeasibleRedundancy);
}
