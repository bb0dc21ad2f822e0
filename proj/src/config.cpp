#include "efk/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace efk {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty())
      out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(value, &pos);
    if (pos != value.size())
      throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

long long to_integer(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  const long long v = to_integer(key, value);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(key + ": out of range");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on")
    return true;
  if (value == "false" || value == "0" || value == "no" || value == "off")
    return false;
  throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

StudyLevel to_level(const std::string& key, const std::string& value) {
  const auto colon = value.find(':');
  if (colon == std::string::npos)
    throw ConfigError(key + ": expected M:N, got '" + value + "'");
  return {to_int(key, trim(value.substr(0, colon))), to_int(key, trim(value.substr(colon + 1)))};
}

}  // namespace

Settings parse_settings(const std::string& text) {
  Settings out;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

Settings read_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_settings(buf.str());
}

std::pair<std::string, std::string> parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || trim(text.substr(0, eq)).empty())
    throw ConfigError("--set expects key=value, got '" + text + "'");
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

RunConfig make_run_config(const Settings& settings) {
  RunConfig c;
  if (auto it = settings.find("problem.name"); it != settings.end()) {
    try {
      c.problem = preset(parse_problem_name(it->second));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("problem.name: ") + e.what());
    }
  } else {
    c.problem = preset(ProblemName::example1);
  }

  for (const auto& [key, value] : settings) {
    if (key == "problem.name" || key.starts_with("study."))
      continue;
    if (key == "problem.kappa")
      c.problem.kappa = to_double(key, value);
    else if (key == "problem.final_time")
      c.problem.final_time = to_double(key, value);
    else if (key == "problem.epsilon")
      c.problem.epsilon = to_double(key, value);
    else if (key == "problem.x_lo")
      c.problem.x_lo = to_double(key, value);
    else if (key == "problem.x_hi")
      c.problem.x_hi = to_double(key, value);
    else if (key == "problem.y_lo")
      c.problem.y_lo = to_double(key, value);
    else if (key == "problem.y_hi")
      c.problem.y_hi = to_double(key, value);
    else if (key == "problem.initial_file")
      c.initial_file = value;
    else if (key == "grid.n")
      c.n_x = c.n_y = to_int(key, value);
    else if (key == "grid.n_x")
      c.n_x = to_int(key, value);
    else if (key == "grid.n_y")
      c.n_y = to_int(key, value);
    else if (key == "time.steps")
      c.steps = to_int(key, value);
    else if (key == "method") {
      if (value == "frs")
        c.method = Method::frs;
      else if (value == "alrs")
        c.method = Method::alrs;
      else
        throw ConfigError("method: expected frs or alrs, got '" + value + "'");
    } else if (key == "alrs.r0")
      c.r0 = to_int(key, value);
    else if (key == "alrs.theta")
      c.policy.theta = to_double(key, value);
    else if (key == "alrs.r_min")
      c.policy.r_min = to_int(key, value);
    else if (key == "alrs.r_max")
      c.policy.r_max = to_int(key, value);
    else if (key == "alrs.truncation") {
      if (value == "absolute")
        c.policy.mode = TruncationMode::absolute;
      else if (value == "relative")
        c.policy.mode = TruncationMode::relative;
      else
        throw ConfigError("alrs.truncation: expected absolute or relative, got '" + value + "'");
    } else if (key == "alrs.biharmonic") {
      if (value == "tolerance")
        c.integrator.biharmonic_fixed_rank = false;
      else if (value == "fixed")
        c.integrator.biharmonic_fixed_rank = true;
      else
        throw ConfigError("alrs.biharmonic: expected tolerance or fixed, got '" + value + "'");
    } else if (key == "alrs.rk_substeps")
      c.integrator.rk_substeps = to_int(key, value);
    else if (key == "output.dir")
      c.output_dir = value;
    else if (key == "output.snapshots") {
      c.snapshot_times.clear();
      for (const auto& t : split(value, ','))
        c.snapshot_times.push_back(to_double(key, t));
    } else if (key == "output.plots")
      c.write_plots = to_bool(key, value);
    else if (key == "seed")
      c.seed = static_cast<std::uint64_t>(to_integer(key, value));
    else
      throw ConfigError("unknown config key '" + key + "'");
  }
  validate(c);
  return c;
}

StudyConfig make_study_config(const Settings& settings) {
  StudyConfig s;
  for (const auto& [key, value] : settings) {
    if (!key.starts_with("study."))
      continue;
    if (key == "study.axis") {
      if (value == "temporal")
        s.axis = StudyAxis::temporal;
      else if (value == "spatial")
        s.axis = StudyAxis::spatial;
      else
        throw ConfigError("study.axis: expected temporal or spatial, got '" + value + "'");
    } else if (key == "study.levels") {
      s.levels.clear();
      for (const auto& item : split(value, ','))
        s.levels.push_back(to_level(key, item));
    } else if (key == "study.reference")
      s.reference = to_level(key, value);
    else
      throw ConfigError("unknown config key '" + key + "'");
  }
  validate(s);
  return s;
}

void validate(const RunConfig& c) {
  try {
    validate(c.problem);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.n_x < 2 || c.n_y < 2)
    throw ConfigError("grid: need at least two nodes per axis");
  if (c.steps < 1)
    throw ConfigError("time.steps must be at least 1");
  if (c.problem.name == ProblemName::custom && !c.initial_file)
    throw ConfigError("custom problems need problem.initial_file");
  if (c.method == Method::alrs) {
    if (c.r0 < 1 || c.r0 > std::min(c.n_x, c.n_y))
      throw ConfigError("alrs.r0 must lie in [1, min(n_x, n_y)]");
    if (!(c.policy.theta > 0.0))
      throw ConfigError("alrs.theta must be positive");
    if (c.policy.r_min < 1 || c.policy.r_max < c.policy.r_min)
      throw ConfigError("alrs ranks must satisfy 1 <= r_min <= r_max");
    if (c.integrator.rk_substeps < 1)
      throw ConfigError("alrs.rk_substeps must be at least 1");
  }
  for (double t : c.snapshot_times)
    if (!(t >= 0.0) || t > c.problem.final_time * (1.0 + 1e-12))
      throw ConfigError("output.snapshots: time " + std::to_string(t) + " outside [0, T]");
}

void validate(const StudyConfig& s) {
  if (s.levels.empty())
    throw ConfigError("study.levels is empty");
  const StudyLevel ref = s.reference;
  if (ref.steps < 1 || ref.n < 2)
    throw ConfigError("study.reference must have M >= 1 and N >= 2");
  for (const StudyLevel& l : s.levels) {
    if (l.steps < 1 || l.n < 2)
      throw ConfigError("study levels must have M >= 1 and N >= 2");
    if (ref.n % l.n != 0)
      throw ConfigError("study level N = " + std::to_string(l.n) +
                        " does not divide the reference N = " + std::to_string(ref.n));
    if (s.axis == StudyAxis::temporal && l.steps >= ref.steps)
      throw ConfigError("temporal study: reference M must exceed every level's M");
    if (s.axis == StudyAxis::spatial && l.n >= ref.n)
      throw ConfigError("spatial study: reference N must exceed every level's N");
  }
}

}  // namespace efk
