#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "weldarm/angles.hpp"
#include "weldarm/errors.hpp"

namespace weldarm {

// One row of the modified-DH table. `alpha_prev`/`a_prev` sit between the
// previous frame and this one; fixed rows contribute a constant transform.
struct DHRow {
  enum class Kind { fixed, revolute };
  double alpha_prev = 0.0;  // rad
  double a_prev = 0.0;      // m
  double d = 0.0;           // m
  double theta_home = 0.0;  // rad
  Kind kind = Kind::revolute;
};

// Uniform rectangular prism, length axis along local x, com at midpoint.
struct LinkInertia {
  double mass = 0.0;               // kg
  Eigen::Vector3d com = Eigen::Vector3d::Zero();          // m, link frame
  Eigen::Vector3d inertia_diag = Eigen::Vector3d::Zero(); // kg m^2 about com (Ixx, Iyy, Izz)

  double inertia_zz() const { return inertia_diag.z(); }
};

inline LinkInertia link_inertia_from_geometry(double length, double width, double thickness,
                                              double density) {
  LinkInertia li;
  li.mass = density * width * thickness * length;
  li.com = Eigen::Vector3d(length / 2.0, 0.0, 0.0);
  li.inertia_diag = Eigen::Vector3d(li.mass * (width * width + thickness * thickness) / 12.0,
                                    li.mass * (length * length + thickness * thickness) / 12.0,
                                    li.mass * (length * length + width * width) / 12.0);
  return li;
}

// Robot description: 7 DH rows (fixed plinth row, five revolute rows, fixed
// tool row carrying L6), link lengths L1..L6 and per-moving-link inertia.
struct RobotModel {
  static constexpr int kJoints = 5;
  static constexpr int kRows = 7;

  std::array<DHRow, kRows> rows{};
  std::array<double, 6> lengths{};          // L1..L6, [0] is the plinth height
  std::array<LinkInertia, kJoints> links{}; // moving links 2..6
  double gravity = 9.81;                    // m/s^2 along base -z

  // material parameters retained for serialization
  double link_width = 0.0;
  double link_thickness = 0.0;
  double density = 0.0;

  double length(int i) const { return lengths[static_cast<std::size_t>(i - 1)]; }  // i in 1..6

  static RobotModel from_geometry(const std::array<double, 6>& lengths_m, double width_m,
                                  double thickness_m, double density_kg_m3,
                                  double gravity_m_s2 = 9.81) {
    RobotModel m;
    m.lengths = lengths_m;
    m.link_width = width_m;
    m.link_thickness = thickness_m;
    m.density = density_kg_m3;
    m.gravity = gravity_m_s2;

    // Row 1: fixed vertical plinth offset. Rows 2..6: revolute; a_prev carries
    // the preceding link length (row 2 has none, joint 2 sits on the plinth).
    // Tool row: fixed, carries L6 out to the electrode tip.
    m.rows[0] = {0.0, 0.0, lengths_m[0], 0.0, DHRow::Kind::fixed};
    m.rows[1] = {kPi / 2.0, 0.0, 0.0, 0.0, DHRow::Kind::revolute};
    for (int i = 2; i < 6; ++i)
      m.rows[static_cast<std::size_t>(i)] =
          {0.0, lengths_m[static_cast<std::size_t>(i - 1)], 0.0, 0.0, DHRow::Kind::revolute};
    m.rows[6] = {0.0, lengths_m[5], 0.0, 0.0, DHRow::Kind::fixed};

    for (int j = 0; j < kJoints; ++j)
      m.links[static_cast<std::size_t>(j)] = link_inertia_from_geometry(
          lengths_m[static_cast<std::size_t>(j + 1)], width_m, thickness_m, density_kg_m3);
    return m;
  }
};

struct PipeSpec {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();  // (c_x, c_z) in base plane, m
  double radius = 0.0;                               // m
  double standoff = 0.0;                             // tip-to-surface gap, m
};

enum class Branch { elbow_up, elbow_down };
enum class RedundancyStrategy { hold, grid_search };

struct GridSpec {
  double theta2_min = deg_to_rad(-100.0), theta2_max = deg_to_rad(100.0);
  double theta3_min = deg_to_rad(-150.0), theta3_max = deg_to_rad(150.0);
  int steps2 = 41, steps3 = 61;
};

struct Tolerances {
  double reach_eps = 1e-9;
  double penetration_eps = 1e-6;
  double continuity_max_step = 0.2;  // rad per sample
};

struct SimConfig {
  double revolution_period = 60.0;  // s
  int sample_count = 360;
  double theta2_held = 0.0;  // rad
  double theta3_held = 0.0;  // rad
  Branch branch = Branch::elbow_up;
  RedundancyStrategy redundancy = RedundancyStrategy::hold;
  GridSpec grid;
  Tolerances tol;
};

struct Config {
  RobotModel robot;
  PipeSpec pipe;
  SimConfig sim;
  std::vector<std::string> warnings;  // non-fatal findings (e.g. length ordering)
};

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const char* key,
                                     const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw InvalidValue(path, "required field missing");
  return *it;
}

inline double num(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) throw InvalidValue(path, "expected a number");
  return j.get<double>();
}

inline double get_num(const nlohmann::json& j, const char* key, const std::string& path) {
  return num(require(j, key, path), path);
}

inline double get_num_or(const nlohmann::json& j, const char* key, double fallback,
                         const std::string& path) {
  auto it = j.find(key);
  return it == j.end() ? fallback : num(*it, path);
}

}  // namespace detail

// Parses and validates the JSON config document described in the README.
// Derived inertial properties are computed from the Plexiglas-style geometry.
inline Config parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedConfig(e.what());
  }
  if (!j.is_object()) throw MalformedConfig("top level must be an object");

  using detail::get_num;
  using detail::get_num_or;
  using detail::num;
  using detail::require;

  Config cfg;

  const auto& jr = require(j, "robot", "robot");
  const auto& jl = require(jr, "lengths_m", "robot.lengths_m");
  if (!jl.is_array() || jl.size() != 6)
    throw InvalidValue("robot.lengths_m", "expected 6 lengths L1..L6");
  std::array<double, 6> lengths{};
  for (std::size_t i = 0; i < 6; ++i) {
    lengths[i] = num(jl[i], "robot.lengths_m");
    if (!(lengths[i] > 0.0)) throw InvalidValue("robot.lengths_m", "lengths must be positive");
  }
  const double width = get_num(jr, "link_width_m", "robot.link_width_m");
  const double thickness = get_num(jr, "link_thickness_m", "robot.link_thickness_m");
  const double density = get_num(jr, "density_kg_m3", "robot.density_kg_m3");
  const double gravity = get_num_or(jr, "gravity_m_s2", 9.81, "robot.gravity_m_s2");
  if (!(width > 0.0)) throw InvalidValue("robot.link_width_m");
  if (!(thickness > 0.0)) throw InvalidValue("robot.link_thickness_m");
  if (!(density > 0.0)) throw InvalidValue("robot.density_kg_m3");
  if (!(gravity >= 0.0)) throw InvalidValue("robot.gravity_m_s2");

  cfg.robot = RobotModel::from_geometry(lengths, width, thickness, density, gravity);
  for (int i = 2; i < 6; ++i)
    if (!(lengths[static_cast<std::size_t>(i - 1)] > lengths[static_cast<std::size_t>(i)])) {
      cfg.warnings.push_back("robot.lengths_m: L2 > L3 > L4 > L5 > L6 does not hold");
      break;
    }

  const auto& jp = require(j, "pipe", "pipe");
  cfg.pipe.center.x() = get_num(jp, "center_x_m", "pipe.center_x_m");
  cfg.pipe.center.y() = get_num_or(jp, "center_z_m", lengths[0], "pipe.center_z_m");
  cfg.pipe.radius = get_num(jp, "radius_m", "pipe.radius");
  cfg.pipe.standoff = get_num_or(jp, "standoff_m", 0.0, "pipe.standoff_m");
  if (!(cfg.pipe.radius > 0.0)) throw InvalidValue("pipe.radius", "must be > 0");
  if (!(cfg.pipe.standoff >= 0.0)) throw InvalidValue("pipe.standoff_m", "must be >= 0");

  const auto& js = require(j, "sim", "sim");
  cfg.sim.revolution_period = get_num_or(js, "revolution_period_s", 60.0, "sim.revolution_period_s");
  if (!(cfg.sim.revolution_period > 0.0)) throw InvalidValue("sim.revolution_period_s");
  if (auto it = js.find("sample_count"); it != js.end()) {
    if (!it->is_number_integer()) throw InvalidValue("sim.sample_count", "expected an integer");
    cfg.sim.sample_count = it->get<int>();
  }
  if (cfg.sim.sample_count < 4) throw InvalidValue("sim.sample_count", "must be >= 4");
  cfg.sim.theta2_held = deg_to_rad(get_num_or(js, "theta2_deg", 0.0, "sim.theta2_deg"));
  cfg.sim.theta3_held = deg_to_rad(get_num_or(js, "theta3_deg", 0.0, "sim.theta3_deg"));

  if (auto it = js.find("branch"); it != js.end()) {
    const std::string b = it->is_string() ? it->get<std::string>() : "";
    if (b == "elbow_up") cfg.sim.branch = Branch::elbow_up;
    else if (b == "elbow_down") cfg.sim.branch = Branch::elbow_down;
    else throw InvalidValue("sim.branch", "expected \"elbow_up\" or \"elbow_down\"");
  }
  if (auto it = js.find("redundancy"); it != js.end()) {
    const std::string rname = it->is_string() ? it->get<std::string>() : "";
    if (rname == "hold") cfg.sim.redundancy = RedundancyStrategy::hold;
    else if (rname == "grid_search") cfg.sim.redundancy = RedundancyStrategy::grid_search;
    else throw InvalidValue("sim.redundancy", "expected \"hold\" or \"grid_search\"");
  }

  if (auto it = js.find("grid"); it != js.end()) {
    const auto& jg = *it;
    auto range = [&](const char* key, double& lo, double& hi) {
      auto rit = jg.find(key);
      if (rit == jg.end()) return;
      if (!rit->is_array() || rit->size() != 2)
        throw InvalidValue(std::string("sim.grid.") + key, "expected [min_deg, max_deg]");
      lo = deg_to_rad(num((*rit)[0], key));
      hi = deg_to_rad(num((*rit)[1], key));
      if (!(hi >= lo)) throw InvalidValue(std::string("sim.grid.") + key, "min must be <= max");
    };
    range("theta2_range_deg", cfg.sim.grid.theta2_min, cfg.sim.grid.theta2_max);
    range("theta3_range_deg", cfg.sim.grid.theta3_min, cfg.sim.grid.theta3_max);
    if (auto sit = jg.find("steps"); sit != jg.end()) {
      if (sit->is_number_integer()) {
        cfg.sim.grid.steps2 = cfg.sim.grid.steps3 = sit->get<int>();
      } else if (sit->is_array() && sit->size() == 2 && (*sit)[0].is_number_integer() &&
                 (*sit)[1].is_number_integer()) {
        cfg.sim.grid.steps2 = (*sit)[0].get<int>();
        cfg.sim.grid.steps3 = (*sit)[1].get<int>();
      } else {
        throw InvalidValue("sim.grid.steps", "expected an integer or [steps2, steps3]");
      }
    }
    if (cfg.sim.grid.steps2 < 1 || cfg.sim.grid.steps3 < 1)
      throw InvalidValue("sim.grid.steps", "must be >= 1");
  }

  if (auto it = js.find("tolerances"); it != js.end()) {
    const auto& jt = *it;
    cfg.sim.tol.reach_eps = get_num_or(jt, "reach_eps", 1e-9, "sim.tolerances.reach_eps");
    cfg.sim.tol.penetration_eps =
        get_num_or(jt, "penetration_eps", 1e-6, "sim.tolerances.penetration_eps");
    cfg.sim.tol.continuity_max_step =
        get_num_or(jt, "continuity_max_step", 0.2, "sim.tolerances.continuity_max_step");
    if (!(cfg.sim.tol.reach_eps > 0.0)) throw InvalidValue("sim.tolerances.reach_eps");
    if (!(cfg.sim.tol.penetration_eps > 0.0)) throw InvalidValue("sim.tolerances.penetration_eps");
    if (!(cfg.sim.tol.continuity_max_step > 0.0))
      throw InvalidValue("sim.tolerances.continuity_max_step");
  }

  return cfg;
}

namespace detail {

// Degree value whose parse converts back to exactly `rad`. The deg->rad->deg
// round trip can be off by an ulp, which would break the serialize/parse
// identity; nudging the emitted degrees compensates.
inline double degrees_preserving(double rad) {
  const double deg = rad_to_deg(rad);
  if (deg_to_rad(deg) == rad) return deg;
  for (const double dir : {std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity()}) {
    double d = deg;
    for (int i = 0; i < 4; ++i) {
      d = std::nextafter(d, dir);
      if (deg_to_rad(d) == rad) return d;
    }
  }
  return deg;
}

}  // namespace detail

// Inverse of parse_config on all fields (warnings are derived, not stored).
inline std::string serialize_config(const Config& cfg) {
  nlohmann::ordered_json j;
  j["robot"]["lengths_m"] = cfg.robot.lengths;
  j["robot"]["link_width_m"] = cfg.robot.link_width;
  j["robot"]["link_thickness_m"] = cfg.robot.link_thickness;
  j["robot"]["density_kg_m3"] = cfg.robot.density;
  j["robot"]["gravity_m_s2"] = cfg.robot.gravity;
  j["pipe"]["center_x_m"] = cfg.pipe.center.x();
  j["pipe"]["center_z_m"] = cfg.pipe.center.y();
  j["pipe"]["radius_m"] = cfg.pipe.radius;
  j["pipe"]["standoff_m"] = cfg.pipe.standoff;
  auto& js = j["sim"];
  js["revolution_period_s"] = cfg.sim.revolution_period;
  js["sample_count"] = cfg.sim.sample_count;
  js["theta2_deg"] = detail::degrees_preserving(cfg.sim.theta2_held);
  js["theta3_deg"] = detail::degrees_preserving(cfg.sim.theta3_held);
  js["branch"] = cfg.sim.branch == Branch::elbow_up ? "elbow_up" : "elbow_down";
  js["redundancy"] = cfg.sim.redundancy == RedundancyStrategy::hold ? "hold" : "grid_search";
  js["grid"]["theta2_range_deg"] = {detail::degrees_preserving(cfg.sim.grid.theta2_min),
                                    detail::degrees_preserving(cfg.sim.grid.theta2_max)};
  js["grid"]["theta3_range_deg"] = {detail::degrees_preserving(cfg.sim.grid.theta3_min),
                                    detail::degrees_preserving(cfg.sim.grid.theta3_max)};
  js["grid"]["steps"] = {cfg.sim.grid.steps2, cfg.sim.grid.steps3};
  js["tolerances"]["reach_eps"] = cfg.sim.tol.reach_eps;
  js["tolerances"]["penetration_eps"] = cfg.sim.tol.penetration_eps;
  js["tolerances"]["continuity_max_step"] = cfg.sim.tol.continuity_max_step;
  return j.dump(2) + "\n";
}

}  // namespace weldarm
