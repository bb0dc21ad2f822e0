#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "efk/config.hpp"
#include "efk/diagnostics.hpp"

namespace efk {

struct Snapshot {
  double requested_time = 0.0;
  int step = 0;
  Matrix values;
};

struct RunResult {
  Field final_field;                          // reconstructed for ALRS
  std::optional<LowRankState> final_lowrank;  // ALRS only
  std::vector<RunRecord> records;             // step 0 .. M, empty when not recorded
  std::vector<Snapshot> snapshots;
};

PeriodicGrid grid_for(const RunConfig& config);

/// Initial field of the configured problem (reads problem.initial_file for
/// custom problems).
Field initial_state(const RunConfig& config, const PeriodicGrid& grid);

/// Runs the configured scheme without touching the file system. With
/// `record_series` false no per-step diagnostics are computed.
RunResult simulate(const RunConfig& config, bool record_series = true);

/// simulate() plus series/snapshot CSVs (and plots when enabled) in
/// config.output_dir, if set.
RunResult run(const RunConfig& config);

/// Pointwise subsampling onto a nested coarse grid.
Matrix restrict_to_coarse(const Matrix& fine, int factor_x, int factor_y);

struct StudyRow {
  int level = 0;
  int steps = 0;
  int n = 0;
  ErrorMetrics errors;
  double order_inf = 0.0;  // NaN on the first level
  double order_l2 = 0.0;
  double rate = 0.0;       // observed order of relerr
};

struct StudyTable {
  Method method = Method::frs;
  std::vector<StudyRow> rows;

  /// `level,M,N,err_inf,order_inf,err_l2,order_l2` for FRS,
  /// `level,M,N,relerr,rate` for ALRS. Undefined orders are empty cells.
  std::string to_csv() const;
};

/// Computes an FRS reference on (M_ref, N_ref) once, then each level with
/// `base.method`, and the observed orders between consecutive levels.
/// Levels run concurrently when OpenMP has more than one thread.
StudyTable refinement_study(const StudyConfig& study, const RunConfig& base);

struct LabeledRecords {
  std::string label;
  std::vector<RunRecord> records;
};

/// Writes series.csv, snapshot CSVs, max_norm/energy/rank SVG charts and a
/// PNG heatmap per snapshot into `dir`. Throws std::invalid_argument for an
/// empty record list.
void emit_plots(const std::vector<RunRecord>& records, const std::vector<Snapshot>& snapshots,
                const std::filesystem::path& dir);

/// Overlay charts for several runs (e.g. FRS against ALRS); images only.
void emit_comparison_plots(const std::vector<LabeledRecords>& runs,
                           const std::filesystem::path& dir);

/// Snapshots previously written to `dir`, ordered by time.
std::vector<Snapshot> load_snapshots(const std::filesystem::path& dir);

}  // namespace efk
