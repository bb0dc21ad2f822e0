// Command-line front end: `efk run`, `efk study`, `efk plot`.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime/numerics error,
// 3 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "efk/errors.hpp"
#include "efk/harness.hpp"
#include "efk/io.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kRuntime = 2, kIo = 3 };

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  bool quiet = false;
};

efk::Settings load_settings(const CommonOptions& o) {
  efk::Settings s;
  if (!o.config_path.empty())
    s = efk::read_settings_file(o.config_path);
  for (const auto& text : o.overrides) {
    auto [key, value] = efk::parse_override(text);
    s[key] = value;
  }
  if (!o.output.empty())
    s["output.dir"] = o.output;
  return s;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Key-value config file");
  cmd->add_option("--set", o.overrides, "Override a config key (key=value), repeatable");
  cmd->add_option("--output", o.output, "Output directory");
  cmd->add_flag("--quiet", o.quiet, "Suppress progress output");
}

int do_run(const CommonOptions& o) {
  const efk::Settings settings = load_settings(o);
  const efk::RunConfig config = efk::make_run_config(settings);
  const efk::RunResult result = efk::run(config);
  if (!o.quiet) {
    const efk::RunRecord& last = result.records.back();
    std::printf("%s %s: %d steps, tau = %.6g, final max_norm = %.6g, energy = %.10g, rank = %d\n",
                std::string(efk::to_string(config.problem.name)).c_str(),
                config.method == efk::Method::frs ? "frs" : "alrs", config.steps, config.tau(),
                last.max_norm, last.energy, last.rank);
    if (config.output_dir)
      std::printf("wrote %s\n", config.output_dir->string().c_str());
  }
  return kOk;
}

int do_study(const CommonOptions& o) {
  const efk::Settings settings = load_settings(o);
  const efk::RunConfig base = efk::make_run_config(settings);
  const efk::StudyConfig study = efk::make_study_config(settings);
  const efk::StudyTable table = efk::refinement_study(study, base);
  const std::string csv = table.to_csv();
  if (base.output_dir) {
    std::filesystem::create_directories(*base.output_dir);
    efk::write_text(*base.output_dir / "study.csv", csv);
  }
  if (!o.quiet)
    std::cout << csv;
  return kOk;
}

int do_plot(const CommonOptions& o, const std::vector<std::string>& inputs) {
  if (o.output.empty())
    throw efk::ConfigError("plot: --output is required");
  const std::filesystem::path out = o.output;
  std::vector<std::string> dirs = inputs;
  if (dirs.empty())
    dirs.push_back(o.output);
  if (dirs.size() == 1) {
    const auto records = efk::parse_series_csv(efk::read_text(std::filesystem::path(dirs[0]) / "series.csv"));
    efk::emit_plots(records, efk::load_snapshots(dirs[0]), out);
  } else {
    std::vector<efk::LabeledRecords> runs;
    for (const auto& d : dirs) {
      const std::filesystem::path p(d);
      runs.push_back({p.filename().empty() ? p.parent_path().filename().string() : p.filename().string(),
                      efk::parse_series_csv(efk::read_text(p / "series.csv"))});
    }
    std::filesystem::create_directories(out);
    efk::emit_comparison_plots(runs, out);
  }
  if (!o.quiet)
    std::printf("wrote plots to %s\n", out.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Splitting and rank-adaptive low-rank solvers for the 2D extended Fisher-Kolmogorov equation"};
  app.require_subcommand(1);

  CommonOptions run_opts, study_opts, plot_opts;
  std::vector<std::string> plot_inputs;
  auto* run_cmd = app.add_subcommand("run", "Run one simulation");
  add_common(run_cmd, run_opts);
  auto* study_cmd = app.add_subcommand("study", "Refinement study against an FRS reference");
  add_common(study_cmd, study_opts);
  auto* plot_cmd = app.add_subcommand("plot", "Render plots from run output directories");
  add_common(plot_cmd, plot_opts);
  plot_cmd->add_option("inputs", plot_inputs, "Run directories to overlay (default: --output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run_cmd)
      return do_run(run_opts);
    if (*study_cmd)
      return do_study(study_opts);
    return do_plot(plot_opts, plot_inputs);
  } catch (const efk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const efk::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
