#pragma once

#include <array>

#include <Eigen/Dense>

#include "weldarm/kinematics.hpp"
#include "weldarm/model.hpp"

namespace weldarm {

// Motion state and net inertial load of one moving link, in its own frame.
struct LinkState {
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();      // rad/s
  Eigen::Vector3d omega_dot = Eigen::Vector3d::Zero();  // rad/s^2
  Eigen::Vector3d vdot = Eigen::Vector3d::Zero();       // m/s^2, frame origin
  Eigen::Vector3d vdot_c = Eigen::Vector3d::Zero();     // m/s^2, com
  Eigen::Vector3d F = Eigen::Vector3d::Zero();          // N, net inertial force at com
  Eigen::Vector3d N = Eigen::Vector3d::Zero();          // N m, net inertial moment at com
};

// Reaction the joint transmits to its link, link frame, plus the same force
// expressed in base-plane components and the actuator torque about the axis.
struct JointLoad {
  Eigen::Vector3d f = Eigen::Vector3d::Zero();  // N
  Eigen::Vector3d n = Eigen::Vector3d::Zero();  // N m
  double fx = 0.0;  // N, base-frame horizontal component of f
  double fz = 0.0;  // N, base-frame vertical component of f
  double tau = 0.0; // N m, n projected on the joint axis
};

struct DynamicsResult {
  std::array<LinkState, RobotModel::kJoints> links;   // links 2..6
  std::array<JointLoad, RobotModel::kJoints> joints;  // joints 2..6

  std::array<double, RobotModel::kJoints> torques() const {
    std::array<double, RobotModel::kJoints> t{};
    for (std::size_t i = 0; i < joints.size(); ++i) t[i] = joints[i].tau;
    return t;
  }
};

// Recursive Newton-Euler inverse dynamics. Outward pass propagates angular
// velocity/acceleration and linear acceleration from the base through all
// seven rows (fixed rows carry zero joint rates); the inward pass accumulates
// forces and moments from the free tool end (f = n = 0, no weld load) back to
// joint 2. Gravity enters as the usual base-acceleration equivalent,
// vdot_0 = +g z.
inline DynamicsResult inverse_dynamics(const RobotModel& model, const JointVector& q,
                                       const JointVector& qdot, const JointVector& qddot) {
  constexpr int R = RobotModel::kRows;
  const Eigen::Vector3d Z(0.0, 0.0, 1.0);

  std::array<Eigen::Matrix3d, R> rot;   // ^{i-1}R_i
  std::array<Eigen::Vector3d, R> off;   // ^{i-1}P_i
  std::array<double, R> rate{}, accel{};
  {
    std::size_t joint = 0;
    for (int i = 0; i < R; ++i) {
      const DHRow& row = model.rows[static_cast<std::size_t>(i)];
      const bool rev = row.kind == DHRow::Kind::revolute;
      const HomTransform T = link_transform(row, rev ? q[joint] : 0.0);
      rot[static_cast<std::size_t>(i)] = T.R;
      off[static_cast<std::size_t>(i)] = T.p;
      rate[static_cast<std::size_t>(i)] = rev ? qdot[joint] : 0.0;
      accel[static_cast<std::size_t>(i)] = rev ? qddot[joint] : 0.0;
      if (rev) ++joint;
    }
  }

  DynamicsResult out;

  // outward pass
  std::array<Eigen::Vector3d, R> w, wd, vd;
  Eigen::Vector3d w_prev = Eigen::Vector3d::Zero();
  Eigen::Vector3d wd_prev = Eigen::Vector3d::Zero();
  Eigen::Vector3d vd_prev(0.0, 0.0, model.gravity);
  std::array<Eigen::Vector3d, R> F{}, N{};
  for (int i = 0; i < R; ++i) {
    const std::size_t si = static_cast<std::size_t>(i);
    const Eigen::Matrix3d Rt = rot[si].transpose();
    w[si] = Rt * w_prev + rate[si] * Z;
    wd[si] = Rt * wd_prev + (Rt * w_prev).cross(rate[si] * Z) + accel[si] * Z;
    vd[si] = Rt * (wd_prev.cross(off[si]) + w_prev.cross(w_prev.cross(off[si])) + vd_prev);
    F[si].setZero();
    N[si].setZero();
    if (i >= 1 && i <= RobotModel::kJoints) {
      const LinkInertia& li = model.links[static_cast<std::size_t>(i - 1)];
      const Eigen::Vector3d vdc =
          wd[si].cross(li.com) + w[si].cross(w[si].cross(li.com)) + vd[si];
      F[si] = li.mass * vdc;
      N[si] = li.inertia_diag.asDiagonal() * wd[si] +
              w[si].cross(Eigen::Vector3d(li.inertia_diag.asDiagonal() * w[si]));
      LinkState& ls = out.links[static_cast<std::size_t>(i - 1)];
      ls.omega = w[si];
      ls.omega_dot = wd[si];
      ls.vdot = vd[si];
      ls.vdot_c = vdc;
      ls.F = F[si];
      ls.N = N[si];
    }
    w_prev = w[si];
    wd_prev = wd[si];
    vd_prev = vd[si];
  }

  // inward pass, tool boundary f = n = 0
  Eigen::Vector3d f = Eigen::Vector3d::Zero();
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
  std::array<Eigen::Vector3d, R> fs, ns;
  for (int i = R - 1; i >= 0; --i) {
    const std::size_t si = static_cast<std::size_t>(i);
    const Eigen::Matrix3d Rn =
        (i + 1 < R) ? rot[static_cast<std::size_t>(i + 1)] : Eigen::Matrix3d::Identity();
    const Eigen::Vector3d pn =
        (i + 1 < R) ? off[static_cast<std::size_t>(i + 1)] : Eigen::Vector3d::Zero();
    Eigen::Vector3d com = Eigen::Vector3d::Zero();
    if (i >= 1 && i <= RobotModel::kJoints) com = model.links[static_cast<std::size_t>(i - 1)].com;
    const Eigen::Vector3d f_child = Rn * f;
    n = N[si] + Rn * n + com.cross(F[si]) + pn.cross(f_child);
    f = f_child + F[si];
    fs[si] = f;
    ns[si] = n;
  }

  // base-frame components and torques for joints 2..6 (rows 1..5)
  Eigen::Matrix3d R0 = Eigen::Matrix3d::Identity();
  for (int i = 0; i < R; ++i) {
    const std::size_t si = static_cast<std::size_t>(i);
    R0 = R0 * rot[si];
    if (i >= 1 && i <= RobotModel::kJoints) {
      JointLoad& jl = out.joints[static_cast<std::size_t>(i - 1)];
      jl.f = fs[si];
      jl.n = ns[si];
      const Eigen::Vector3d f_base = R0 * fs[si];
      jl.fx = f_base.x();
      jl.fz = f_base.z();
      jl.tau = ns[si].z();
    }
  }
  return out;
}

// Independent statics check: actuator torque about each joint axis from the
// moment of the distal link weights, straight from the planar geometry.
inline std::array<double, RobotModel::kJoints> gravity_torques_oracle(const RobotModel& model,
                                                                      const JointVector& q) {
  const auto pts = joint_positions(model, q);
  std::array<double, RobotModel::kJoints> com_x{};
  {
    double ang = 0.0;
    for (int i = 0; i < RobotModel::kJoints; ++i) {
      ang += q[static_cast<std::size_t>(i)];
      com_x[static_cast<std::size_t>(i)] =
          pts[static_cast<std::size_t>(i)].x() + 0.5 * model.length(i + 2) * std::cos(ang);
    }
  }
  std::array<double, RobotModel::kJoints> tau{};
  for (int j = 0; j < RobotModel::kJoints; ++j) {
    double sum = 0.0;
    for (int i = j; i < RobotModel::kJoints; ++i)
      sum += model.links[static_cast<std::size_t>(i)].mass *
             (com_x[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)].x());
    tau[static_cast<std::size_t>(j)] = model.gravity * sum;
  }
  return tau;
}

struct Energy {
  double kinetic = 0.0;    // J
  double potential = 0.0;  // J
};

// Kinetic and potential energy from planar rigid-body kinematics; fully
// independent of the Newton-Euler recursion above.
inline Energy total_energy(const RobotModel& model, const JointVector& q,
                           const JointVector& qdot) {
  Energy e;
  double ang = 0.0, rate = 0.0;
  Eigen::Vector2d p(0.0, model.length(1));
  Eigen::Vector2d v(0.0, 0.0);
  for (int i = 0; i < RobotModel::kJoints; ++i) {
    const std::size_t si = static_cast<std::size_t>(i);
    ang += q[si];
    rate += qdot[si];
    const double len = model.length(i + 2);
    const Eigen::Vector2d dir(std::cos(ang), std::sin(ang));
    const Eigen::Vector2d perp(-std::sin(ang), std::cos(ang));
    const Eigen::Vector2d vc = v + rate * (len / 2.0) * perp;
    const Eigen::Vector2d com = p + (len / 2.0) * dir;
    const LinkInertia& li = model.links[si];
    e.kinetic += 0.5 * li.mass * vc.squaredNorm() + 0.5 * li.inertia_zz() * rate * rate;
    e.potential += model.gravity * li.mass * com.y();
    p += len * dir;
    v += rate * len * perp;
  }
  return e;
}

}  // namespace weldarm
