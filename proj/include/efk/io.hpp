#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "efk/diagnostics.hpp"

namespace efk {

/// %.17g, the round-trip precision used for every floating-point CSV cell.
std::string format_real(double v);

/// Header `step,time,max_norm,energy,rank`, LF line endings.
std::string series_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_series_csv(const std::string& text);

/// n_x rows by n_y columns, row index = x index.
std::string field_csv(const Matrix& values);
Matrix parse_field_csv(const std::string& text);

/// `snapshot_t<time>.csv` with the time printed by %g.
std::string snapshot_filename(double time);

/// Whole-file helpers; both throw IoError.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace efk
