#include "efk/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "efk/config.hpp"

namespace efk {

namespace {

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ','))
    cells.push_back(cell);
  return cells;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (!line.empty())
      out.push_back(line);
  }
  return out;
}

double parse_cell(const std::string& cell) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos == cell.size())
      return v;
  } catch (const std::exception&) {
  }
  throw IoError("malformed CSV cell '" + cell + "'");
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string series_csv(const std::vector<RunRecord>& records) {
  std::string out = "step,time,max_norm,energy,rank\n";
  for (const RunRecord& r : records) {
    out += std::to_string(r.step);
    out += ',';
    out += format_real(r.time);
    out += ',';
    out += format_real(r.max_norm);
    out += ',';
    out += format_real(r.energy);
    out += ',';
    out += std::to_string(r.rank);
    out += '\n';
  }
  return out;
}

std::vector<RunRecord> parse_series_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != "step,time,max_norm,energy,rank")
    throw IoError("series CSV: missing or unexpected header");
  std::vector<RunRecord> out;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = split_cells(lines[k]);
    if (cells.size() != 5)
      throw IoError("series CSV: expected 5 columns on line " + std::to_string(k + 1));
    RunRecord r;
    r.step = static_cast<int>(parse_cell(cells[0]));
    r.time = parse_cell(cells[1]);
    r.max_norm = parse_cell(cells[2]);
    r.energy = parse_cell(cells[3]);
    r.rank = static_cast<int>(parse_cell(cells[4]));
    out.push_back(r);
  }
  return out;
}

std::string field_csv(const Matrix& values) {
  std::string out;
  out.reserve(static_cast<std::size_t>(values.size()) * 24);
  for (long i = 0; i < values.rows(); ++i) {
    for (long j = 0; j < values.cols(); ++j) {
      if (j)
        out += ',';
      out += format_real(values(i, j));
    }
    out += '\n';
  }
  return out;
}

Matrix parse_field_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty())
    throw IoError("field CSV is empty");
  const std::size_t cols = split_cells(lines.front()).size();
  Matrix out(static_cast<long>(lines.size()), static_cast<long>(cols));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto cells = split_cells(lines[i]);
    if (cells.size() != cols)
      throw IoError("field CSV: ragged row " + std::to_string(i + 1));
    for (std::size_t j = 0; j < cols; ++j)
      out(static_cast<long>(i), static_cast<long>(j)) = parse_cell(cells[j]);
  }
  return out;
}

std::string snapshot_filename(double time) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_t%g.csv", time);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out)
    throw IoError("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace efk
