#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "weldarm/weldarm.hpp"

using namespace weldarm;
namespace fs = std::filesystem;

namespace {

Config load(const std::string& name) {
  std::ifstream is(std::string(WELDARM_CONFIG_DIR) + "/" + name, std::ios::binary);
  REQUIRE(is.good());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

fs::path scratch_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("weldarm_test_" + tag);
  fs::remove_all(p);
  return p;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST_CASE("trajectory differentiation") {
  SECTION("constant input has zero derivatives") {
    std::vector<JointVector> qs(16);
    for (auto& q : qs) q[2] = 0.7;
    const Derivatives d = differentiate_trajectory(qs, 0.25);
    for (std::size_t k = 0; k < qs.size(); ++k)
      for (std::size_t j = 0; j < 5; ++j) {
        CHECK(d.qdot[k][j] == 0.0);
        CHECK(d.qddot[k][j] == 0.0);
      }
  }
  SECTION("sinusoid matches its analytic derivative") {
    const int n = 360;
    const double period = 60.0, dt = period / n, w = kTwoPi / period;
    std::vector<JointVector> qs(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) qs[static_cast<std::size_t>(k)][0] = std::sin(w * k * dt);
    const Derivatives d = differentiate_trajectory(qs, dt);
    for (int k = 0; k < n; ++k) {
      CHECK(std::abs(d.qdot[static_cast<std::size_t>(k)][0] - w * std::cos(w * k * dt)) <= 1e-3);
      CHECK(std::abs(d.qddot[static_cast<std::size_t>(k)][0] + w * w * std::sin(w * k * dt)) <=
            1e-3);
    }
  }
  SECTION("a winding joint differentiates cleanly across the seam") {
    const int n = 90;
    const double dt = 1.0;
    std::vector<JointVector> qs(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      qs[static_cast<std::size_t>(k)][4] = kTwoPi * k / n + 0.05 * std::sin(kTwoPi * k / n);
    const Derivatives d = differentiate_trajectory(qs, dt);
    // without the whole-turn seam closure qdot[0] would be ~ -pi/dt
    CHECK(std::abs(d.qdot[0][4] - kTwoPi / (n * dt)) <= 0.01);
    CHECK(std::abs(d.qdot[static_cast<std::size_t>(n - 1)][4] - kTwoPi / (n * dt)) <= 0.01);
  }
  SECTION("too few samples") {
    std::vector<JointVector> qs(3);
    CHECK_THROWS_AS(differentiate_trajectory(qs, 0.1), TooFewSamples);
  }
}

TEST_CASE("simulation composes planning, differentiation and dynamics") {
  const Config cfg = load("paper_default.json");
  const auto traj = run_simulation(cfg.robot, cfg.pipe, cfg.sim);
  REQUIRE(traj.size() == 360);

  SECTION("time axis and finiteness") {
    for (std::size_t k = 0; k < traj.size(); ++k) {
      if (k > 0) CHECK(traj[k].t > traj[k - 1].t);
      for (std::size_t j = 0; j < 5; ++j) {
        CHECK(std::isfinite(traj[k].q[j]));
        CHECK(std::isfinite(traj[k].qdot[j]));
        CHECK(std::isfinite(traj[k].qddot[j]));
        CHECK(std::isfinite(traj[k].tau[j]));
      }
    }
  }

  SECTION("tip velocity from the jacobian matches the commanded sweep") {
    const double v_ref = kTwoPi * (cfg.pipe.radius + cfg.pipe.standoff) / cfg.sim.revolution_period;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const auto J = planar_jacobian(cfg.robot, traj[k].q);
      Eigen::Vector3d tipdot = Eigen::Vector3d::Zero();
      for (std::size_t j = 0; j < 5; ++j) tipdot += J.col(static_cast<int>(j)) * traj[k].qdot[j];
      const Eigen::Vector2d expect =
          v_ref * Eigen::Vector2d(-std::sin(traj[k].psi), std::cos(traj[k].psi));
      CHECK((Eigen::Vector2d(tipdot.x(), tipdot.y()) - expect).norm() / v_ref <= 1e-3);
    }
  }

  SECTION("outputs close periodically") {
    const auto range_of = [&](auto getter) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& s : traj) {
        for (std::size_t j = 0; j < 5; ++j) {
          lo = std::min(lo, getter(s, j));
          hi = std::max(hi, getter(s, j));
        }
      }
      return hi - lo;
    };
    const auto seam_gap = [&](auto getter) {
      double gap = 0.0;
      for (std::size_t j = 0; j < 5; ++j)
        gap = std::max(gap, std::abs(getter(traj.front(), j) - getter(traj.back(), j)));
      return gap;
    };
    const auto vel = [](const TrajectorySample& s, std::size_t j) { return s.qdot[j]; };
    const auto acc = [](const TrajectorySample& s, std::size_t j) { return s.qddot[j]; };
    const auto tau = [](const TrajectorySample& s, std::size_t j) { return s.tau[j]; };
    // one-sample drift of a periodic signal stays well under 5% of its range
    CHECK(seam_gap(vel) <= 0.05 * range_of(vel));
    CHECK(seam_gap(acc) <= 0.05 * range_of(acc));
    CHECK(seam_gap(tau) <= 0.05 * range_of(tau));
  }

  SECTION("sample count override") {
    Config small = cfg;
    small.sim.sample_count = 4;
    small.sim.tol.continuity_max_step = 2.0;  // steps grow with the sample spacing
    CHECK(run_simulation(small.robot, small.pipe, small.sim).size() == 4);
  }

  SECTION("planning failures propagate") {
    Config bad = cfg;
    bad.pipe.center.x() = 100.0;
    CHECK_THROWS_AS(run_simulation(bad.robot, bad.pipe, bad.sim), Unreachable);
  }
}

TEST_CASE("csv output round-trips and is deterministic") {
  const Config cfg = load("paper_default.json");
  const auto traj = run_simulation(cfg.robot, cfg.pipe, cfg.sim);

  const std::string csv = trajectory_csv(traj);
  CHECK(csv == trajectory_csv(traj));  // byte-identical on identical input

  std::stringstream ss(csv);
  std::string header;
  REQUIRE(std::getline(ss, header));
  CHECK(header ==
        "t,psi,theta2,theta3,theta4,theta5,theta6,"
        "dtheta2,dtheta3,dtheta4,dtheta5,dtheta6,"
        "ddtheta2,ddtheta3,ddtheta4,ddtheta5,ddtheta6,"
        "fx2,fx3,fx4,fx5,fx6,fz2,fz3,fz4,fz5,fz6,tau2,tau3,tau4,tau5,tau6");

  std::size_t rows = 0;
  std::string line;
  while (std::getline(ss, line)) {
    REQUIRE(rows < traj.size());
    const auto cells = split(line, ',');
    REQUIRE(cells.size() == 32);
    const TrajectorySample& s = traj[rows];
    const auto close = [](const std::string& cell, double v) {
      const double parsed = std::stod(cell);
      return std::abs(parsed - v) <= 1e-12 * std::max(1.0, std::abs(v));
    };
    CHECK(close(cells[0], s.t));
    CHECK(close(cells[1], s.psi));
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(close(cells[2 + j], s.q[j]));
      CHECK(close(cells[7 + j], s.qdot[j]));
      CHECK(close(cells[12 + j], s.qddot[j]));
      CHECK(close(cells[17 + j], s.fx[j]));
      CHECK(close(cells[22 + j], s.fz[j]));
      CHECK(close(cells[27 + j], s.tau[j]));
    }
    ++rows;
  }
  CHECK(rows == traj.size());
}

TEST_CASE("output directory contents") {
  const Config cfg = load("paper_default.json");
  Config small = cfg;
  small.sim.sample_count = 24;
  small.sim.tol.continuity_max_step = 0.5;  // steps grow with the sample spacing
  const auto traj = run_simulation(small.robot, small.pipe, small.sim);

  SECTION("with plots") {
    const fs::path dir = scratch_dir("plots");
    write_outputs(traj, dir, true);
    std::size_t svgs = 0, csvs = 0, jsons = 0, others = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
      const auto ext = e.path().extension();
      if (ext == ".svg") ++svgs;
      else if (ext == ".csv") ++csvs;
      else if (ext == ".json") ++jsons;
      else ++others;
    }
    CHECK(svgs == 30);
    CHECK(csvs == 1);
    CHECK(jsons == 1);
    CHECK(others == 0);  // no leftover temp files

    std::ifstream is(dir / "summary.json");
    REQUIRE(is.good());
    const auto summary = nlohmann::json::parse(is);
    CHECK(summary["sample_count"] == 24);
    double peak = 0.0;
    for (const auto& s : traj) peak = std::max(peak, std::abs(s.tau[0]));
    CHECK(summary["joints"]["2"]["tau_peak_abs"].get<double>() == peak);
    fs::remove_all(dir);
  }
  SECTION("without plots") {
    const fs::path dir = scratch_dir("noplots");
    write_outputs(traj, dir, false);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
      ++files;
      CHECK(e.path().extension() != ".svg");
    }
    CHECK(files == 2);
    fs::remove_all(dir);
  }
}

TEST_CASE("summary peaks approach the statics limit for a slow sweep") {
  Config cfg = load("paper_default.json");
  cfg.sim.revolution_period = 1e6;
  const auto traj = run_simulation(cfg.robot, cfg.pipe, cfg.sim);

  double peak_tau2 = 0.0, oracle_peak = 0.0;
  for (const auto& s : traj) {
    peak_tau2 = std::max(peak_tau2, std::abs(s.tau[0]));
    oracle_peak = std::max(oracle_peak, std::abs(gravity_torques_oracle(cfg.robot, s.q)[0]));
  }
  CHECK(std::abs(peak_tau2 - oracle_peak) / oracle_peak <= 1e-5);
}
