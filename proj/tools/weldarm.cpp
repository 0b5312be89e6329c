#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "weldarm/weldarm.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

weldarm::Config load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw weldarm::MalformedConfig("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return weldarm::parse_config(ss.str());
}

void print_warnings(const weldarm::Config& cfg) {
  for (const std::string& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
}

int run_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<int> samples, std::optional<double> period, bool no_plots) {
  weldarm::Config cfg = load_config(config_path);
  print_warnings(cfg);
  if (samples) cfg.sim.sample_count = *samples;
  if (period) cfg.sim.revolution_period = *period;
  if (cfg.sim.sample_count < 4) throw weldarm::InvalidValue("sim.sample_count", "must be >= 4");
  if (!(cfg.sim.revolution_period > 0.0)) throw weldarm::InvalidValue("sim.revolution_period_s");

  const auto t0 = std::chrono::steady_clock::now();
  const auto traj = weldarm::run_simulation(cfg.robot, cfg.pipe, cfg.sim);
  const auto t1 = std::chrono::steady_clock::now();
  weldarm::write_outputs(traj, out_dir, !no_plots);

  const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  std::cout << "simulated " << traj.size() << " samples in " << ms << " ms; outputs in "
            << out_dir << "\n";
  return 0;
}

int run_check(const std::string& config_path) {
  weldarm::Config cfg = load_config(config_path);
  print_warnings(cfg);
  std::cout << "config OK: L1.." << "L6 = [";
  for (std::size_t i = 0; i < cfg.robot.lengths.size(); ++i)
    std::cout << (i ? ", " : "") << cfg.robot.lengths[i];
  std::cout << "] m, pipe r = " << cfg.pipe.radius << " m at (" << cfg.pipe.center.x() << ", "
            << cfg.pipe.center.y() << ")\n";

  const auto plan = weldarm::plan_trajectory(cfg.robot, cfg.pipe, cfg.sim);

  double max_step = 0.0, min_clearance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < plan.size(); ++k) {
    if (k > 0)
      for (std::size_t j = 0; j < weldarm::JointVector::size(); ++j)
        max_step = std::max(max_step, std::abs(plan[k].q[j] - plan[k - 1].q[j]));
    const auto pts = weldarm::joint_positions(cfg.robot, plan[k].q);
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
      const Eigen::Vector2d d = pts[s + 1] - pts[s];
      const double len2 = d.squaredNorm();
      double t = 0.0;
      if (len2 > 0.0) t = std::clamp((cfg.pipe.center - pts[s]).dot(d) / len2, 0.0, 1.0);
      min_clearance = std::min(min_clearance, (pts[s] + t * d - cfg.pipe.center).norm());
    }
  }
  // closure: one more solve at psi = 2 pi seeded with the last sample
  weldarm::SimConfig closing = cfg.sim;
  weldarm::PlanarPose target;
  const double rr = cfg.pipe.radius + cfg.pipe.standoff;
  target.x = cfg.pipe.center.x() + rr * std::cos(weldarm::kTwoPi);
  target.z = cfg.pipe.center.y() + rr * std::sin(weldarm::kTwoPi);
  target.phi = weldarm::norm_angle(weldarm::kTwoPi + weldarm::kPi);
  std::optional<weldarm::JointVector> prev = plan.back().q;
  const auto choice = weldarm::redundancy_select(cfg.robot, target, cfg.pipe, prev, closing);
  auto wrap = weldarm::solve_ik(cfg.robot, target, choice.theta2, choice.theta3, choice.branch,
                                cfg.sim.tol.reach_eps);
  double closure = 0.0;
  for (std::size_t j = 0; j < weldarm::JointVector::size(); ++j)
    closure = std::max(closure, std::abs(weldarm::norm_angle(wrap.q[j] - plan[0].q[j])));

  std::cout << "plan OK: " << plan.size() << " samples, max joint step " << max_step
            << " rad, min link clearance " << min_clearance << " m (pipe radius "
            << cfg.pipe.radius << "), closure residual " << closure << " rad (mod 2 pi)\n";
  return 0;
}

int run_ik(const std::string& config_path, double x, double z, double phi, double theta2,
           double theta3, const std::string& branch_name) {
  weldarm::Config cfg = load_config(config_path);
  weldarm::Branch branch;
  if (branch_name == "elbow_up") branch = weldarm::Branch::elbow_up;
  else if (branch_name == "elbow_down") branch = weldarm::Branch::elbow_down;
  else throw weldarm::InvalidValue("--branch", "expected elbow_up or elbow_down");

  weldarm::PlanarPose target{x, z, weldarm::norm_angle(phi)};
  const auto sol =
      weldarm::solve_ik(cfg.robot, target, theta2, theta3, branch, cfg.sim.tol.reach_eps);
  const auto fk = weldarm::forward_kinematics(cfg.robot, sol.q);

  nlohmann::ordered_json j;
  j["theta2_rad"] = sol.q[0];
  j["theta3_rad"] = sol.q[1];
  j["theta4_rad"] = sol.q[2];
  j["theta5_rad"] = sol.q[3];
  j["theta6_rad"] = sol.q[4];
  j["near_singular"] = sol.mid.near_singular;
  j["fk_residual_m"] = std::hypot(fk.tip.x - target.x, fk.tip.z - target.z);
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weldarm - planar 5R pipe-welding arm simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::optional<int> samples;
  std::optional<double> period;
  bool no_plots = false;

  auto* sim = app.add_subcommand("simulate", "plan a weld revolution and write CSV/SVG outputs");
  sim->add_option("--config", config_path, "config JSON")->required();
  sim->add_option("--out", out_dir, "output directory");
  sim->add_option("--samples", samples, "override sim.sample_count");
  sim->add_option("--period", period, "override sim.revolution_period_s");
  sim->add_flag("--no-plots", no_plots, "skip SVG rendering");

  auto* chk = app.add_subcommand("check", "validate a config and report plan feasibility");
  chk->add_option("--config", config_path, "config JSON")->required();

  double x = 0.0, z = 0.0, phi = 0.0, theta2 = 0.0, theta3 = 0.0;
  std::string branch_name = "elbow_up";
  auto* ik = app.add_subcommand("ik", "solve one inverse-kinematics query (angles in radians)");
  ik->add_option("--config", config_path, "config JSON")->required();
  ik->add_option("--x", x, "tip x, m")->required();
  ik->add_option("--z", z, "tip z, m")->required();
  ik->add_option("--phi", phi, "electrode direction, rad")->required();
  ik->add_option("--theta2", theta2, "held theta2, rad")->required();
  ik->add_option("--theta3", theta3, "held theta3, rad")->required();
  ik->add_option("--branch", branch_name, "elbow_up | elbow_down");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return run_simulate(config_path, out_dir, samples, period, no_plots);
    if (chk->parsed()) return run_check(config_path);
    return run_ik(config_path, x, z, phi, theta2, theta3, branch_name);
  } catch (const weldarm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const weldarm::PlanningError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const weldarm::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}
