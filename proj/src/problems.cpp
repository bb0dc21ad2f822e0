#include "efk/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace efk {

namespace {

constexpr double pi = std::numbers::pi;

template <class F>
Field sample(const PeriodicGrid& grid, F&& f) {
  Field out(grid);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < grid.n_y; ++j)
    for (int i = 0; i < grid.n_x; ++i)
      out(i, j) = f(grid.x(i), grid.y(j));
  return out;
}

double sphere(double radius, double dist, double epsilon) {
  return std::tanh((radius - dist) / (epsilon * std::numbers::sqrt2));
}

}  // namespace

std::string_view to_string(ProblemName name) {
  switch (name) {
    case ProblemName::example1: return "example1";
    case ProblemName::star: return "star";
    case ProblemName::dumbbell: return "dumbbell";
    case ProblemName::torus: return "torus";
    case ProblemName::custom: return "custom";
  }
  return "unknown";
}

ProblemName parse_problem_name(std::string_view text) {
  for (ProblemName n : {ProblemName::example1, ProblemName::star, ProblemName::dumbbell,
                        ProblemName::torus, ProblemName::custom})
    if (text == to_string(n))
      return n;
  throw std::invalid_argument("unknown problem '" + std::string(text) + "'");
}

ProblemSpec preset(ProblemName name) {
  ProblemSpec p;
  p.name = name;
  switch (name) {
    case ProblemName::example1:
    case ProblemName::custom:
      break;
    case ProblemName::star:
      p.x_lo = 0.0, p.x_hi = 1.0, p.y_lo = 0.0, p.y_hi = 1.0;
      p.kappa = 1e-4;
      p.final_time = 0.01;
      break;
    case ProblemName::dumbbell:
      p.x_lo = 0.0, p.x_hi = 2.0, p.y_lo = 0.0, p.y_hi = 1.0;
      p.kappa = 1e-4;
      p.final_time = 0.02;
      break;
    case ProblemName::torus:
      p.x_lo = -1.0, p.x_hi = 1.0, p.y_lo = -1.0, p.y_hi = 1.0;
      p.kappa = 1e-4;
      p.final_time = 0.04;
      break;
  }
  return p;
}

void validate(const ProblemSpec& problem) {
  if (!(problem.kappa > 0.0))
    throw std::invalid_argument("problem.kappa must be positive");
  if (!(problem.final_time > 0.0))
    throw std::invalid_argument("problem.final_time must be positive");
  if (problem.epsilon && !(*problem.epsilon > 0.0))
    throw std::invalid_argument("problem.epsilon must be positive");
  if (!(problem.x_hi > problem.x_lo) || !(problem.y_hi > problem.y_lo))
    throw std::invalid_argument("problem domain extents must be positive");
}

double example1_value(double x, double y) {
  return 0.1 - 0.2 * std::cos(2.0 * pi * (x - 12.0) / 32.0) * std::sin(2.0 * pi * (y - 1.0) / 32.0) +
         0.1 * std::pow(std::cos(pi * (x + 10.0) / 32.0), 2) *
             std::pow(std::sin(pi * (y + 3.0) / 32.0), 2) -
         0.2 * std::pow(std::sin(4.0 * pi * x / 32.0), 2) * std::cos(4.0 * pi * (y - 6.0) / 32.0);
}

Field example1_initial(const PeriodicGrid& grid) { return sample(grid, example1_value); }

double interface_width(const PeriodicGrid& grid) {
  if (!(grid.h_x > 0.0))
    throw std::invalid_argument("interface_width: h_x must be positive");
  return 5.0 * grid.h_x / (std::numbers::sqrt2 * std::atanh(0.9));
}

double star_value(double x, double y, double epsilon) {
  const double dx = x - 0.5;
  const double dy = y - 0.5;
  // The angle is undefined at the centre; take it as zero there.
  double theta = 0.0;
  if (dx > 0.0)
    theta = std::atan(dy / dx);
  else if (dx < 0.0)
    theta = pi + std::atan(dy / dx);
  else if (dy != 0.0)
    theta = pi + (dy > 0.0 ? pi / 2.0 : -pi / 2.0);
  const double radius = 0.25 + 0.1 * std::cos(6.0 * theta);
  return sphere(radius, std::hypot(dx, dy), epsilon);
}

double dumbbell_value(double x, double y, double epsilon) {
  if (x > 0.4 && x < 1.6 && y > 0.4 && y < 0.6)
    return 1.0;
  return 1.0 + sphere(0.2, std::hypot(x - 0.3, y - 0.5), epsilon) +
         sphere(0.2, std::hypot(x - 1.7, y - 0.5), epsilon);
}

double torus_value(double x, double y, double epsilon) {
  const double r = std::hypot(x, y);
  return -1.0 + sphere(0.4, r, epsilon) - sphere(0.3, r, epsilon);
}

Field star_initial(const PeriodicGrid& grid, double epsilon) {
  return sample(grid, [epsilon](double x, double y) { return star_value(x, y, epsilon); });
}

Field dumbbell_initial(const PeriodicGrid& grid, double epsilon) {
  return sample(grid, [epsilon](double x, double y) { return dumbbell_value(x, y, epsilon); });
}

Field torus_initial(const PeriodicGrid& grid, double epsilon) {
  return sample(grid, [epsilon](double x, double y) { return torus_value(x, y, epsilon); });
}

Field initial_field(const ProblemSpec& problem, const PeriodicGrid& grid) {
  const double eps = problem.epsilon.value_or(interface_width(grid));
  switch (problem.name) {
    case ProblemName::example1: return example1_initial(grid);
    case ProblemName::star: return star_initial(grid, eps);
    case ProblemName::dumbbell: return dumbbell_initial(grid, eps);
    case ProblemName::torus: return torus_initial(grid, eps);
    case ProblemName::custom: break;
  }
  throw std::invalid_argument("initial_field: custom problems take their initial data from a file");
}

}  // namespace efk
