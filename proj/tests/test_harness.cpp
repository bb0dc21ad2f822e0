#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "efk/harness.hpp"
#include "efk/io.hpp"

using namespace efk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("efk_test_harness_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig tiny(Method method) {
  Settings s = parse_settings(
      "problem.name = example1\n"
      "grid.n = 16\n"
      "time.steps = 8\n"
      "output.snapshots = 0, 0.5, 1\n");
  s["method"] = method == Method::frs ? "frs" : "alrs";
  return make_run_config(s);
}

int cli(const std::string& args) {
  const std::string cmd = std::string(EFK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> cells(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::stringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ','))
      row.push_back(c);
    if (!line.empty() && line.back() == ',')
      row.push_back("");
    out.push_back(row);
  }
  return out;
}

}  // namespace

TEST_CASE("settings parsing") {
  const Settings s = parse_settings("# comment\n a.b = 1 # trailing\n\nc=x y\r\n");
  CHECK(s.size() == 2);
  CHECK(s.at("a.b") == "1");
  CHECK(s.at("c") == "x y");
  CHECK_THROWS_AS(parse_settings("no equals sign"), ConfigError);
  CHECK_THROWS_AS(parse_settings(" = 3"), ConfigError);

  CHECK(parse_override("grid.n=32") == std::pair<std::string, std::string>{"grid.n", "32"});
  CHECK_THROWS_AS(parse_override("grid.n"), ConfigError);
  CHECK_THROWS_AS(read_settings_file("/nonexistent/efk.cfg"), IoError);
}

TEST_CASE("make_run_config") {
  const RunConfig d = make_run_config({});
  CHECK(d.problem.name == ProblemName::example1);
  CHECK(d.method == Method::frs);

  const RunConfig c = make_run_config({{"problem.name", "star"},
                                       {"problem.kappa", "2e-4"},
                                       {"grid.n_x", "32"},
                                       {"grid.n_y", "16"},
                                       {"time.steps", "10"},
                                       {"method", "alrs"},
                                       {"alrs.r0", "5"},
                                       {"alrs.theta", "1e-6"},
                                       {"alrs.r_max", "12"},
                                       {"alrs.truncation", "relative"},
                                       {"output.snapshots", "0.001,0.01"},
                                       {"seed", "7"}});
  CHECK(c.problem.name == ProblemName::star);
  CHECK(c.problem.kappa == 2e-4);
  CHECK(c.problem.final_time == 0.01);  // preset kept
  CHECK(c.n_x == 32);
  CHECK(c.n_y == 16);
  CHECK(c.tau() == doctest::Approx(1e-3));
  CHECK(c.r0 == 5);
  CHECK(c.policy.theta == 1e-6);
  CHECK(c.policy.r_max == 12);
  CHECK(c.policy.mode == TruncationMode::relative);
  CHECK(c.snapshot_times.size() == 2);
  CHECK(c.seed == 7);

  CHECK_THROWS_AS(make_run_config({{"grid.nx", "3"}}), ConfigError);
  CHECK_THROWS_AS(make_run_config({{"time.steps", "0"}}), ConfigError);
  CHECK_THROWS_AS(make_run_config({{"time.steps", "ten"}}), ConfigError);
  CHECK_THROWS_AS(make_run_config({{"problem.kappa", "-1"}}), ConfigError);
  CHECK_THROWS_AS(make_run_config({{"problem.name", "square"}}), ConfigError);
  CHECK_THROWS_AS(make_run_config({{"method", "rk4"}}), ConfigError);
  CHECK_THROWS_AS(make_run_config({{"method", "alrs"}, {"alrs.theta", "0"}}), ConfigError);
  CHECK_THROWS_AS(make_run_config({{"method", "alrs"}, {"alrs.r0", "0"}}), ConfigError);
  CHECK_THROWS_AS(make_run_config({{"output.snapshots", "2"}}), ConfigError);
  CHECK_THROWS_AS(make_run_config({{"problem.name", "custom"}}), ConfigError);
}

TEST_CASE("make_study_config") {
  const StudyConfig s = make_study_config(
      {{"study.axis", "spatial"}, {"study.levels", "64:16, 64:32"}, {"study.reference", "64:128"}});
  CHECK(s.axis == StudyAxis::spatial);
  REQUIRE(s.levels.size() == 2);
  CHECK(s.levels[1].steps == 64);
  CHECK(s.levels[1].n == 32);
  CHECK(s.reference.n == 128);

  CHECK_THROWS_AS(make_study_config({{"study.levels", "16:48"}, {"study.reference", "64:128"}}),
                  ConfigError);
  CHECK_THROWS_AS(make_study_config({{"study.levels", "64:16"}, {"study.reference", "64:128"}}),
                  ConfigError);
  CHECK_THROWS_AS(make_study_config({{"study.axis", "spatial"},
                                     {"study.levels", "64:128"},
                                     {"study.reference", "64:128"}}),
                  ConfigError);
  CHECK_THROWS_AS(make_study_config({{"study.levels", "16"}}), ConfigError);
  CHECK_THROWS_AS(make_study_config({}), ConfigError);
}

TEST_CASE("run bookkeeping") {
  RunConfig c = tiny(Method::frs);
  c.steps = 16;
  const RunResult r = simulate(c);
  REQUIRE(r.records.size() == 17);
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    CHECK(r.records[k].step == static_cast<int>(k));
    CHECK(r.records[k].time == doctest::Approx(k * c.tau()));
  }
  CHECK(r.snapshots.size() == 3);
  CHECK(r.snapshots.back().step == 16);
  CHECK(r.snapshots.back().values == r.final_field.values);

  const RunResult a = simulate(tiny(Method::alrs));
  REQUIRE(a.final_lowrank);
  for (const RunRecord& rec : a.records)
    CHECK(rec.rank >= 1);
  CHECK(a.records.front().rank == 4);

  // Snapshot times between steps snap to the nearest one.
  RunConfig off = tiny(Method::frs);
  off.snapshot_times = {0.3};
  CHECK(simulate(off).snapshots.front().step == 2);
}

TEST_CASE("custom initial data from file") {
  const fs::path dir = scratch("custom");
  fs::create_directories(dir);
  const PeriodicGrid g = build_grid(0, 32, 0, 32, 16, 16);
  write_text(dir / "u0.csv", field_csv(example1_initial(g).values));

  RunConfig c = tiny(Method::frs);
  c.problem.name = ProblemName::custom;
  c.initial_file = dir / "u0.csv";
  CHECK(simulate(c).final_field.values == simulate(tiny(Method::frs)).final_field.values);
  c.n_x = c.n_y = 8;
  CHECK_THROWS_AS(simulate(c), ConfigError);
  c.initial_file = dir / "missing.csv";
  CHECK_THROWS_AS(simulate(c), IoError);
  fs::remove_all(dir);
}

TEST_CASE("outputs are deterministic and match the golden schema") {
  for (Method m : {Method::frs, Method::alrs}) {
    const std::string tag = m == Method::frs ? "frs" : "alrs";
    const fs::path d1 = scratch(tag + "_1"), d2 = scratch(tag + "_2");
    RunConfig c = tiny(m);
    c.output_dir = d1;
    run(c);
    c.output_dir = d2;
    run(c);
    for (const char* name : {"series.csv", "snapshot_t0.csv", "snapshot_t0.5.csv", "snapshot_t1.csv"}) {
      INFO(tag << " " << name);
      REQUIRE(fs::exists(d1 / name));
      CHECK(read_text(d1 / name) == read_text(d2 / name));
    }

    const std::string series = read_text(d1 / "series.csv");
    CHECK(series.find('\r') == std::string::npos);
    const std::string golden = read_text(fs::path(EFK_GOLDEN_DIR) / ("tiny_" + tag + "_series.csv"));
    const auto got = cells(series), want = cells(golden);
    REQUIRE(got.size() == want.size());
    CHECK(got[0] == want[0]);
    for (std::size_t k = 1; k < got.size(); ++k) {
      REQUIRE(got[k].size() == 5);
      CHECK(got[k][0] == want[k][0]);
      CHECK(got[k][4] == want[k][4]);
      for (int col = 1; col <= 3; ++col) {
        const double g = std::stod(got[k][col]), w = std::stod(want[k][col]);
        CHECK(std::abs(g - w) <= 1e-12 * (1.0 + std::abs(w)));
        // 17 significant digits round-trip exactly.
        CHECK(format_real(g) == got[k][col]);
      }
    }
    CHECK(parse_series_csv(series).size() == 9);

    const Matrix snap = parse_field_csv(read_text(d1 / "snapshot_t1.csv"));
    CHECK(snap.rows() == 16);
    CHECK(snap.cols() == 16);
    fs::remove_all(d1);
    fs::remove_all(d2);
  }
}

TEST_CASE("restrict_to_coarse") {
  Matrix ramp(12, 8);
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 12; ++i)
      ramp(i, j) = 100.0 * i + j;
  CHECK(restrict_to_coarse(ramp, 1, 1) == ramp);
  const Matrix c = restrict_to_coarse(ramp, 3, 2);
  REQUIRE(c.rows() == 4);
  REQUIRE(c.cols() == 4);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i)
      CHECK(c(i, j) == 100.0 * (3 * i) + 2 * j);
  const Matrix k = restrict_to_coarse(Matrix::Constant(8, 8, 0.7), 4, 4);
  CHECK((k.array() == 0.7).all());
  CHECK_THROWS_AS(restrict_to_coarse(ramp, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(restrict_to_coarse(ramp, 0, 1), std::invalid_argument);
}

TEST_CASE("refinement_study") {
  RunConfig base = tiny(Method::frs);
  base.snapshot_times.clear();
  StudyConfig s;
  s.axis = StudyAxis::temporal;
  s.levels = {{4, 16}, {4, 16}, {8, 16}};
  s.reference = {64, 16};
  const StudyTable t = refinement_study(s, base);
  REQUIRE(t.rows.size() == 3);
  CHECK(std::isnan(t.rows[0].order_inf));
  CHECK(std::isnan(t.rows[1].order_inf));  // identical levels
  CHECK(t.rows[2].order_inf > 0.5);
  CHECK(t.rows[0].errors.err_inf == t.rows[1].errors.err_inf);

  const auto table = cells(t.to_csv());
  CHECK(table[0] == std::vector<std::string>{"level", "M", "N", "err_inf", "order_inf", "err_l2", "order_l2"});
  REQUIRE(table[2].size() == 7);
  CHECK(table[2][4].empty());
  CHECK(table[2][6].empty());
  CHECK(!table[3][4].empty());

  base.method = Method::alrs;
  const StudyTable a = refinement_study(s, base);
  CHECK(cells(a.to_csv())[0] == std::vector<std::string>{"level", "M", "N", "relerr", "rate"});
  CHECK(a.rows[2].errors.relerr < a.rows[0].errors.relerr);
}

TEST_CASE("emit_plots") {
  const fs::path dir = scratch("plots");
  CHECK_THROWS_AS(emit_plots({}, {}, dir), std::invalid_argument);

  emit_plots({{0, 0.0, 0.5, 1.0, 3}}, {}, dir);
  for (const char* name : {"series.csv", "max_norm.svg", "energy.svg", "rank.svg"})
    CHECK(fs::exists(dir / name));
  CHECK(read_text(dir / "max_norm.svg").find("<circle") != std::string::npos);

  RunConfig c = make_run_config({{"problem.name", "star"},
                                 {"grid.n", "32"},
                                 {"time.steps", "50"},
                                 {"output.snapshots", "0,0.0016,0.005,0.01"}});
  const RunResult r = simulate(c);
  emit_plots(r.records, r.snapshots, dir);
  int pngs = 0;
  for (const auto& e : fs::directory_iterator(dir))
    pngs += e.path().extension() == ".png";
  CHECK(pngs == 4);
  CHECK(load_snapshots(dir).size() == 4);
  fs::remove_all(dir);
}

TEST_CASE("cli exit codes") {
  const fs::path dir = scratch("cli");
  const std::string out = " --output " + dir.string();
  CHECK(cli("run --quiet --set grid.n=8 --set time.steps=2" + out) == 0);
  CHECK(fs::exists(dir / "series.csv"));
  CHECK(cli("plot --quiet " + dir.string() + out) == 0);
  CHECK(fs::exists(dir / "energy.svg"));
  CHECK(cli("study --quiet --set grid.n=8 --set study.levels=2:8,4:8 --set study.reference=16:16" + out) == 0);
  CHECK(fs::exists(dir / "study.csv"));

  CHECK(cli("run --set grid.n=abc") == 1);
  CHECK(cli("run --set no.such.key=1") == 1);
  CHECK(cli("run --bogus-flag") == 1);
  CHECK(cli("") == 1);
  CHECK(cli("run --config /nonexistent/efk.cfg") == 3);
  CHECK(cli("run --quiet --set grid.n=8 --set time.steps=2 --output /proc/efk_cannot_write") == 3);
  // A stiff explicit-free scheme cannot blow up on valid input, so exercise the
  // numerics path through a custom field holding NaN.
  write_text(dir / "nan.csv", "nan,0\n0,0\n");
  CHECK(cli("run --set problem.name=custom --set grid.n=2 --set problem.initial_file=" +
            (dir / "nan.csv").string()) == 2);
  fs::remove_all(dir);
}
