#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weldarm {

// Config-file problems. `simulate`/`check` map these to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedConfig : ConfigError {
  explicit MalformedConfig(const std::string& what) : ConfigError("malformed config: " + what) {}
};

struct InvalidValue : ConfigError {
  std::string field;
  explicit InvalidValue(const std::string& field_, const std::string& detail = "")
      : ConfigError("invalid value: " + field_ + (detail.empty() ? "" : " (" + detail + ")")),
        field(field_) {}
};

// Planning failures. Exit code 3.
struct PlanningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Unreachable : PlanningError {
  std::size_t sample = 0;
  explicit Unreachable(const std::string& what = "target out of reach") : PlanningError(what) {}
  Unreachable(std::size_t sample_, const std::string& what)
      : PlanningError(what), sample(sample_) {}
};

struct NoFeasibleRedundancy : PlanningError {
  std::size_t sample = 0;
  explicit NoFeasibleRedundancy(std::size_t sample_ = 0)
      : PlanningError("no reachable, collision-free grid candidate at sample " +
                      std::to_string(sample_)),
        sample(sample_) {}
};

struct CollisionAtSample : PlanningError {
  std::size_t sample;
  explicit CollisionAtSample(std::size_t sample_)
      : PlanningError("link/pipe collision at sample " + std::to_string(sample_)),
        sample(sample_) {}
};

struct ContinuityViolation : PlanningError {
  int joint;         // 2..6
  std::size_t sample;
  double step;
  ContinuityViolation(int joint_, std::size_t sample_, double step_)
      : PlanningError("joint " + std::to_string(joint_) + " steps " + std::to_string(step_) +
                      " rad at sample " + std::to_string(sample_)),
        joint(joint_), sample(sample_), step(step_) {}
};

struct TooFewSamples : std::runtime_error {
  explicit TooFewSamples(std::size_t n)
      : std::runtime_error("trajectory differentiation needs >= 4 samples, got " +
                           std::to_string(n)) {}
};

// Output failures. Exit code 4.
struct IoError : std::runtime_error {
  std::string path;
  IoError(const std::string& path_, const std::string& what)
      : std::runtime_error(what + ": " + path_), path(path_) {}
};

}  // namespace weldarm
