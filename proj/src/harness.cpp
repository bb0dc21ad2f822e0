#include "efk/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <regex>
#include <stdexcept>

#include "efk/errors.hpp"
#include "efk/flows.hpp"
#include "efk/io.hpp"
#include "efk/plot.hpp"

namespace efk {

namespace {

// Step index of each requested snapshot time, snapped to the nearest step.
std::vector<int> snapshot_steps(const RunConfig& config) {
  std::vector<int> steps;
  for (double t : config.snapshot_times) {
    const long k = std::lround(t / config.tau());
    steps.push_back(static_cast<int>(std::clamp<long>(k, 0, config.steps)));
  }
  return steps;
}

void capture(std::vector<Snapshot>& out, const RunConfig& config, const std::vector<int>& steps,
             int step, const Matrix& values) {
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (steps[i] == step)
      out.push_back({config.snapshot_times[i], step, values});
}

std::vector<double> column(const std::vector<RunRecord>& records, double RunRecord::*member) {
  std::vector<double> out;
  for (const RunRecord& r : records)
    out.push_back(r.*member);
  return out;
}

std::vector<double> ranks(const std::vector<RunRecord>& records) {
  std::vector<double> out;
  for (const RunRecord& r : records)
    out.push_back(r.rank);
  return out;
}

std::string cell(double v) { return std::isfinite(v) ? format_real(v) : std::string(); }

}  // namespace

PeriodicGrid grid_for(const RunConfig& config) {
  const ProblemSpec& p = config.problem;
  return build_grid(p.x_lo, p.x_hi, p.y_lo, p.y_hi, config.n_x, config.n_y);
}

Field initial_state(const RunConfig& config, const PeriodicGrid& grid) {
  if (config.problem.name != ProblemName::custom)
    return initial_field(config.problem, grid);
  Matrix values = parse_field_csv(read_text(*config.initial_file));
  if (values.rows() != grid.n_x || values.cols() != grid.n_y)
    throw ConfigError("problem.initial_file: field is " + std::to_string(values.rows()) + "x" +
                      std::to_string(values.cols()) + ", grid is " + std::to_string(grid.n_x) +
                      "x" + std::to_string(grid.n_y));
  return Field(grid, std::move(values));
}

RunResult simulate(const RunConfig& config, bool record_series) {
  validate(config);
  const PeriodicGrid grid = grid_for(config);
  const SpectrumTables spec(grid, config.problem.kappa);
  const Field u0 = initial_state(config, grid);
  const double tau = config.tau();
  const std::vector<int> snap_steps = snapshot_steps(config);

  RunResult result;
  if (config.method == Method::frs) {
    if (record_series)
      result.records.push_back(record_step(0, tau, u0, spec));
    capture(result.snapshots, config, snap_steps, 0, u0.values);
    result.final_field = frs_run(u0, tau, config.steps, spec, [&](int k, const Field& u) {
      if (record_series)
        result.records.push_back(record_step(k, tau, u, spec));
      capture(result.snapshots, config, snap_steps, k, u.values);
    });
  } else {
    const LowRankState x0 = truncate_fixed(u0, config.r0);
    if (record_series)
      result.records.push_back(record_step(0, tau, x0, spec));
    if (!snap_steps.empty())
      capture(result.snapshots, config, snap_steps, 0, reconstruct(x0).values);
    const LowRankState x = alrs_run(
        x0, tau, config.steps, spec, config.policy,
        [&](int k, const LowRankState& s) {
          if (record_series)
            result.records.push_back(record_step(k, tau, s, spec));
          if (std::find(snap_steps.begin(), snap_steps.end(), k) != snap_steps.end())
            capture(result.snapshots, config, snap_steps, k, reconstruct(s).values);
        },
        config.integrator);
    result.final_field = reconstruct(x);
    result.final_lowrank = x;
  }
  if (!result.final_field.values.allFinite())
    throw NumericsError("run produced non-finite values");
  std::stable_sort(result.snapshots.begin(), result.snapshots.end(),
                   [](const Snapshot& a, const Snapshot& b) { return a.requested_time < b.requested_time; });
  return result;
}

RunResult run(const RunConfig& config) {
  RunResult result = simulate(config, true);
  if (config.output_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*config.output_dir, ec);
    if (ec)
      throw IoError("cannot create " + config.output_dir->string() + ": " + ec.message());
    if (config.write_plots) {
      emit_plots(result.records, result.snapshots, *config.output_dir);
    } else {
      write_text(*config.output_dir / "series.csv", series_csv(result.records));
      for (const Snapshot& s : result.snapshots)
        write_text(*config.output_dir / snapshot_filename(s.requested_time), field_csv(s.values));
    }
  }
  return result;
}

Matrix restrict_to_coarse(const Matrix& fine, int factor_x, int factor_y) {
  if (factor_x < 1 || factor_y < 1 || fine.rows() % factor_x != 0 || fine.cols() % factor_y != 0)
    throw std::invalid_argument("restrict_to_coarse: factors must divide the fine dimensions");
  const long nx = fine.rows() / factor_x;
  const long ny = fine.cols() / factor_y;
  Matrix coarse(nx, ny);
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i < nx; ++i)
      coarse(i, j) = fine(i * factor_x, j * factor_y);
  return coarse;
}

std::string StudyTable::to_csv() const {
  std::string out = method == Method::frs ? "level,M,N,err_inf,order_inf,err_l2,order_l2\n"
                                          : "level,M,N,relerr,rate\n";
  for (const StudyRow& r : rows) {
    out += std::to_string(r.level) + ',' + std::to_string(r.steps) + ',' + std::to_string(r.n) + ',';
    if (method == Method::frs)
      out += format_real(r.errors.err_inf) + ',' + cell(r.order_inf) + ',' +
             format_real(r.errors.err_l2) + ',' + cell(r.order_l2);
    else
      out += format_real(r.errors.relerr) + ',' + cell(r.rate);
    out += '\n';
  }
  return out;
}

StudyTable refinement_study(const StudyConfig& study, const RunConfig& base) {
  validate(study);
  validate(base);

  RunConfig ref_config = base;
  ref_config.method = Method::frs;
  ref_config.steps = study.reference.steps;
  ref_config.n_x = ref_config.n_y = study.reference.n;
  ref_config.output_dir.reset();
  ref_config.snapshot_times.clear();
  const Field reference = simulate(ref_config, false).final_field;

  const long n_levels = static_cast<long>(study.levels.size());
  StudyTable table;
  table.method = base.method;
  table.rows.resize(n_levels);
  std::vector<std::exception_ptr> errors(n_levels);

#pragma omp parallel for schedule(dynamic)
  for (long l = 0; l < n_levels; ++l) {
    try {
      const StudyLevel level = study.levels[l];
      RunConfig c = base;
      c.steps = level.steps;
      c.n_x = c.n_y = level.n;
      c.output_dir.reset();
      c.snapshot_times.clear();
      const RunResult r = simulate(c, false);
      const int factor = study.reference.n / level.n;
      const Field ref_coarse(r.final_field.grid,
                             restrict_to_coarse(reference.values, factor, factor));
      StudyRow& row = table.rows[l];
      row.level = static_cast<int>(l);
      row.steps = level.steps;
      row.n = level.n;
      row.errors = error_metrics(r.final_field, ref_coarse, r.final_field.grid);
    } catch (...) {
      errors[l] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e)
      std::rethrow_exception(e);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double extent = base.problem.x_hi - base.problem.x_lo;
  auto step_size = [&](const StudyRow& r) {
    return study.axis == StudyAxis::temporal ? base.problem.final_time / r.steps
                                             : extent / r.n;
  };
  for (long l = 0; l < n_levels; ++l) {
    StudyRow& row = table.rows[l];
    row.order_inf = row.order_l2 = row.rate = nan;
    if (l == 0)
      continue;
    const StudyRow& prev = table.rows[l - 1];
    const double s0 = step_size(prev), s1 = step_size(row);
    row.order_inf = observed_order(prev.errors.err_inf, row.errors.err_inf, s0, s1);
    row.order_l2 = observed_order(prev.errors.err_l2, row.errors.err_l2, s0, s1);
    row.rate = observed_order(prev.errors.relerr, row.errors.relerr, s0, s1);
  }
  return table;
}

void emit_plots(const std::vector<RunRecord>& records, const std::vector<Snapshot>& snapshots,
                const std::filesystem::path& dir) {
  if (records.empty())
    throw std::invalid_argument("emit_plots: no records to plot");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / "series.csv", series_csv(records));
  for (const Snapshot& s : snapshots)
    write_text(dir / snapshot_filename(s.requested_time), field_csv(s.values));
  emit_comparison_plots({{"solution", records}}, dir);
  for (const Snapshot& s : snapshots) {
    auto name = snapshot_filename(s.requested_time);
    name.replace(name.size() - 4, 4, ".png");
    plot::write_heatmap_png(dir / name, s.values, -1.0, 1.0);
  }
}

void emit_comparison_plots(const std::vector<LabeledRecords>& runs,
                           const std::filesystem::path& dir) {
  std::vector<plot::Series> max_norms, energies, rank_series;
  for (const LabeledRecords& run : runs) {
    if (run.records.empty())
      throw std::invalid_argument("emit_plots: run '" + run.label + "' has no records");
    const auto t = column(run.records, &RunRecord::time);
    max_norms.push_back({run.label, t, column(run.records, &RunRecord::max_norm)});
    energies.push_back({run.label, t, column(run.records, &RunRecord::energy)});
    rank_series.push_back({run.label, t, ranks(run.records)});
  }
  write_text(dir / "max_norm.svg", plot::line_chart_svg("Maximum norm", "t", "max |u|", max_norms));
  write_text(dir / "energy.svg", plot::line_chart_svg("Discrete energy", "t", "E", energies));
  write_text(dir / "rank.svg", plot::line_chart_svg("Rank", "t", "rank", rank_series));
}

std::vector<Snapshot> load_snapshots(const std::filesystem::path& dir) {
  static const std::regex pattern(R"(snapshot_t(.+)\.csv)");
  std::vector<Snapshot> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (!std::regex_match(name, m, pattern))
      continue;
    Snapshot s;
    try {
      s.requested_time = std::stod(m[1].str());
    } catch (const std::exception&) {
      continue;
    }
    s.values = parse_field_csv(read_text(entry.path()));
    out.push_back(std::move(s));
  }
  if (ec)
    throw IoError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.requested_time < b.requested_time; });
  return out;
}

}  // namespace efk
