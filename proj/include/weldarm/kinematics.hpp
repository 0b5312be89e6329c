#pragma once

#include <array>

#include <Eigen/Dense>

#include "weldarm/angles.hpp"
#include "weldarm/model.hpp"

namespace weldarm {

// Rigid transform as an explicit rotation block and translation.
struct HomTransform {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d p = Eigen::Vector3d::Zero();

  HomTransform operator*(const HomTransform& o) const { return {R * o.R, R * o.p + p}; }
  Eigen::Vector3d apply(const Eigen::Vector3d& v) const { return R * v + p; }
};

// Tip position and in-plane electrode direction, base (x, z) plane.
struct PlanarPose {
  double x = 0.0;    // m
  double z = 0.0;    // m
  double phi = 0.0;  // rad, normalized to (-pi, pi]
};

// The five revolute angles theta2..theta6, radians. Index 0 is theta2.
struct JointVector {
  std::array<double, 5> q{};

  double& operator[](std::size_t i) { return q[i]; }
  double operator[](std::size_t i) const { return q[i]; }
  double theta(int joint) const { return q[static_cast<std::size_t>(joint - 2)]; }  // joint in 2..6
  static constexpr std::size_t size() { return 5; }

  friend bool operator==(const JointVector& a, const JointVector& b) { return a.q == b.q; }
};

// Transformation of frame i into frame i-1 for one DH row. `joint_value` is
// added to theta_home for revolute rows and ignored for fixed rows.
inline HomTransform link_transform(const DHRow& row, double joint_value) {
  const double theta =
      row.theta_home + (row.kind == DHRow::Kind::revolute ? joint_value : 0.0);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(row.alpha_prev), sa = std::sin(row.alpha_prev);
  HomTransform T;
  T.R << ct, -st, 0.0,
         st * ca, ct * ca, -sa,
         st * sa, ct * sa, ca;
  T.p << row.a_prev, -sa * row.d, ca * row.d;
  return T;
}

struct FkResult {
  // frames[k] maps frame k+1 to base; frames[5] is the last revolute frame,
  // frames[6] the tool frame whose origin is the electrode tip.
  std::array<HomTransform, RobotModel::kRows> frames;
  PlanarPose tip;
};

inline FkResult forward_kinematics(const RobotModel& model, const JointVector& q) {
  FkResult out;
  HomTransform acc;
  std::size_t joint = 0;
  for (std::size_t i = 0; i < RobotModel::kRows; ++i) {
    const DHRow& row = model.rows[i];
    const double value = row.kind == DHRow::Kind::revolute ? q[joint++] : 0.0;
    acc = acc * link_transform(row, value);
    out.frames[i] = acc;
  }
  const HomTransform& tool = out.frames[RobotModel::kRows - 1];
  out.tip.x = tool.p.x();
  out.tip.z = tool.p.z();
  // Planar rotation angle from the (x,z) block, r11 = cos, r31 = sin.
  out.tip.phi = std::atan2(tool.R(2, 0), tool.R(0, 0));
  return out;
}

// Origins of frames 2..tool projected on the base (x, z) plane: joint-2 pivot,
// joints 3..6 and the electrode tip. Consecutive points are L2..L6 apart.
// These are exactly the frame origins of forward_kinematics; the planar chain
// keeps all origins at y = 0 so the cumulative-angle form below is identical.
inline std::array<Eigen::Vector2d, 6> joint_positions(const RobotModel& model,
                                                      const JointVector& q) {
  std::array<Eigen::Vector2d, 6> pts;
  double x = 0.0, z = model.length(1), ang = 0.0;
  pts[0] = {x, z};
  for (int k = 0; k < RobotModel::kJoints; ++k) {
    ang += q[static_cast<std::size_t>(k)];
    x += model.length(k + 2) * std::cos(ang);
    z += model.length(k + 2) * std::sin(ang);
    pts[static_cast<std::size_t>(k + 1)] = {x, z};
  }
  return pts;
}

// 3x5 map from joint rates to (xdot, zdot, phidot). All joint axes are the
// plane normal, so column j is the quarter-turned lever arm plus a unit
// orientation row.
inline Eigen::Matrix<double, 3, 5> planar_jacobian(const RobotModel& model,
                                                   const JointVector& q) {
  const auto pts = joint_positions(model, q);
  const Eigen::Vector2d tip = pts[5];
  Eigen::Matrix<double, 3, 5> J;
  for (int j = 0; j < RobotModel::kJoints; ++j) {
    const Eigen::Vector2d r = tip - pts[static_cast<std::size_t>(j)];
    J(0, j) = -r.y();
    J(1, j) = r.x();
    J(2, j) = 1.0;
  }
  return J;
}

}  // namespace weldarm
