#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "efk/lowrank.hpp"
#include "efk/problems.hpp"

namespace efk {

/// Bad configuration text or values.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File-system failure while reading inputs or writing results.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Method { frs, alrs };

struct RunConfig {
  ProblemSpec problem;
  int n_x = 64, n_y = 64;
  int steps = 16;
  Method method = Method::frs;
  int r0 = 4;
  TruncationPolicy policy;
  IntegratorOptions integrator;
  std::optional<std::filesystem::path> initial_file;  // custom problems only
  std::optional<std::filesystem::path> output_dir;
  std::vector<double> snapshot_times;
  bool write_plots = false;
  std::uint64_t seed = 0;

  double tau() const { return problem.final_time / steps; }
};

enum class StudyAxis { temporal, spatial };

struct StudyLevel {
  int steps;  // M
  int n;      // N = n_x = n_y
};

struct StudyConfig {
  StudyAxis axis = StudyAxis::temporal;
  std::vector<StudyLevel> levels;
  StudyLevel reference{1024, 256};
};

/// Flat `key = value` settings with dotted keys. '#' starts a comment.
using Settings = std::map<std::string, std::string>;

Settings parse_settings(const std::string& text);
Settings read_settings_file(const std::filesystem::path& path);
/// "key=value" as given to --set.
std::pair<std::string, std::string> parse_override(const std::string& text);

/// Builds a RunConfig from defaults plus `settings`; problem.name is applied
/// first so that its preset can be overridden key by key. Throws ConfigError
/// on unknown keys or invalid values.
RunConfig make_run_config(const Settings& settings);
StudyConfig make_study_config(const Settings& settings);

/// Throws ConfigError if the configuration violates its invariants.
void validate(const RunConfig& config);
void validate(const StudyConfig& study);

}  // namespace efk
