#pragma once

#include <Eigen/Dense>

#include "weldarm/kinematics.hpp"
#include "weldarm/model.hpp"

namespace weldarm {

// Penetration test: true iff the segment [p1, p2] comes closer to `center`
// than radius - penetration_eps. Tangency and surface contact are allowed,
// which is what keeps the electrode tip legal while it rides the weld circle.
inline bool segment_circle_intersects(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                                      const Eigen::Vector2d& center, double radius,
                                      double penetration_eps) {
  const Eigen::Vector2d d = p2 - p1;
  const double len2 = d.squaredNorm();
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp((center - p1).dot(d) / len2, 0.0, 1.0);
  const double dist = (p1 + t * d - center).norm();
  return dist < radius - penetration_eps;
}

// True iff any of the five link segments penetrates the pipe circle.
inline bool check_collision(const RobotModel& model, const JointVector& q, const PipeSpec& pipe,
                            double penetration_eps = 1e-6) {
  const auto pts = joint_positions(model, q);
  for (std::size_t k = 0; k + 1 < pts.size(); ++k)
    if (segment_circle_intersects(pts[k], pts[k + 1], pipe.center, pipe.radius, penetration_eps))
      return true;
  return false;
}

}  // namespace weldarm
