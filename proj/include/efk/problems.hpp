#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "efk/grid.hpp"

namespace efk {

enum class ProblemName { example1, star, dumbbell, torus, custom };

std::string_view to_string(ProblemName name);
/// Throws std::invalid_argument for unknown names.
ProblemName parse_problem_name(std::string_view text);

/// Physical setup: domain, stabilizing parameter, final time and (for the
/// interface problems) the interface width. An unset epsilon means "derive
/// it from the grid spacing".
struct ProblemSpec {
  ProblemName name = ProblemName::example1;
  double x_lo = 0.0, x_hi = 32.0;
  double y_lo = 0.0, y_hi = 32.0;
  double kappa = 0.01;
  double final_time = 1.0;
  std::optional<double> epsilon;
};

/// Preset parameters: example1 is kappa = 0.01 on [0,32]^2 up to T = 1; the
/// three shapes use kappa = 1e-4 and stop at the last time shown for them
/// (star 0.01, dumbbell 0.02, torus 0.04).
ProblemSpec preset(ProblemName name);

/// Throws std::invalid_argument when kappa, T or epsilon are not positive.
void validate(const ProblemSpec& problem);

double example1_value(double x, double y);
Field example1_initial(const PeriodicGrid& grid);

/// 5 h_x / (sqrt(2) atanh(0.9))
double interface_width(const PeriodicGrid& grid);

double star_value(double x, double y, double epsilon);
double dumbbell_value(double x, double y, double epsilon);
double torus_value(double x, double y, double epsilon);

Field star_initial(const PeriodicGrid& grid, double epsilon);
Field dumbbell_initial(const PeriodicGrid& grid, double epsilon);
Field torus_initial(const PeriodicGrid& grid, double epsilon);

/// Initial field of a preset problem on `grid`. Throws for `custom`, whose
/// initial data must come from elsewhere.
Field initial_field(const ProblemSpec& problem, const PeriodicGrid& grid);

}  // namespace efk
