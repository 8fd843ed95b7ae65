#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "commands.hpp"
#include "lfp/errors.hpp"

using namespace lfp;
namespace fs = std::filesystem;

namespace {

io::Config config_of(std::initializer_list<std::string> sets) {
  io::Config c;
  for (const auto& s : sets) c.set(s);
  return c;
}

const std::string& content_of(const cli::FileSet& files, const std::string& name) {
  for (const auto& [path, content] : files) {
    if (path.filename() == name) return content;
  }
  FAIL("missing output " << name);
  static const std::string empty;
  return empty;
}

std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) row.push_back(io::parse_double(f));
    rows.push_back(row);
  }
  return rows;
}

int run(const std::string& args) {
  const std::string cmd = std::string(LFPDECODE_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) { return io::read_file(p); }

} // namespace

TEST_CASE("synth writes header plus trials x channels x N rows") {
  const auto cfg = config_of({"data.N=32", "data.trials_per_class=3", "data.channels=2",
                              "model.K=2", "model.T=2", "seed=4"});
  const auto files = cli::synth_command(cfg, "out/ds.csv");
  REQUIRE(files.size() == 2);
  const auto& csv = files[0].second;
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 6 * 2 * 32);
  CHECK(files[1].first == fs::path("out/ds.meta"));
  CHECK(cli::synth_command(cfg, "out/ds.csv") == files);
  CHECK_THROWS_AS((void)cli::synth_command(config_of({"model.separation=1000"}), "x.csv"),
                  ValidationError);
  CHECK_THROWS_AS((void)cli::synth_command(config_of({"pipeline.P=3"}), "x.csv"), ValidationError);
}

TEST_CASE("estimate") {
  SUBCASE("zero signal gives zero outputs") {
    const SampledSignal zero(std::vector<double>(128, 0.0));
    for (const std::string method : {"pinsker", "bjs"}) {
      const auto cfg = method == "pinsker" ? config_of({"pinsker.alpha=2", "pinsker.C=10"}) : io::Config{};
      const auto files = cli::estimate_command(cfg, zero, method, "o");
      for (const auto& row : parse_csv(content_of(files, "coefficients.csv"))) CHECK(row[2] == 0.0);
      for (const auto& row : parse_csv(content_of(files, "reconstruction.csv"))) CHECK(row[2] == 0.0);
    }
  }
  SUBCASE("pure low harmonic is reconstructed") {
    const std::size_t N = 512;
    const double sigma = 0.5;
    Rng rng(3);
    std::vector<double> clean(N), noisy(N);
    for (std::size_t l = 0; l < N; ++l) {
      clean[l] = 0.5 + std::sqrt(2.0) * std::cos(2 * std::numbers::pi * 2 * static_cast<double>(l) / N);
      noisy[l] = clean[l] + sigma * rng.normal();
    }
    for (const std::string method : {"pinsker", "bjs"}) {
      const auto cfg = method == "pinsker"
                           ? config_of({"pinsker.alpha=2", "pinsker.C=10", "noise.sigma=0.5"})
                           : config_of({"noise.sigma=0.5"});
      const auto rows = parse_csv(content_of(cli::estimate_command(cfg, SampledSignal(noisy), method, "o"),
                                             "reconstruction.csv"));
      REQUIRE(rows.size() == N);
      double max_err = 0.0;
      for (std::size_t l = 0; l < N; ++l) max_err = std::max(max_err, std::abs(rows[l][2] - clean[l]));
      CHECK(max_err <= 3 * sigma * std::sqrt(7.0) / std::sqrt(static_cast<double>(N)) + 0.05);
    }
  }
  SUBCASE("bjs takes no tuning keys; pinsker needs them") {
    const SampledSignal s(std::vector<double>(64, 1.0));
    CHECK_THROWS_AS((void)cli::estimate_command(config_of({"pinsker.mu=3"}), s, "bjs", "o"),
                    ValidationError);
    CHECK_THROWS_AS((void)cli::estimate_command(io::Config{}, s, "pinsker", "o"), ValidationError);
    CHECK_THROWS_AS((void)cli::estimate_command(io::Config{}, s, "wavelet", "o"), ValidationError);
  }
}

TEST_CASE("benchmark") {
  const auto model = make_class_model(3, EllipsoidSpec(2.0, 10.0), 3, 0.4, 0.05, 2);
  const auto ds = generate_dataset(model, 8, 2, 64, 4, NoiseModel{1e-6}, 3);
  const auto cfg = config_of({"pipeline.T=3", "pipeline.P=6"});
  const auto files = cli::benchmark_command(cfg, ds, "pinsker", false, "r");
  CHECK(content_of(files, "summary.txt").find("accuracy: 1.000") != std::string::npos);
  CHECK(cli::benchmark_command(cfg, ds, "pinsker", false, "r") == files);
  CHECK_THROWS_AS((void)cli::benchmark_command(io::Config{}, ds, "bjs", true, "r"), ValidationError);
  CHECK_THROWS_AS((void)cli::benchmark_command(config_of({"grid.Ts=3"}), ds, "pinsker", false, "r"),
                  ValidationError);
  const auto grid = cli::benchmark_command(config_of({"pipeline.T=3", "pipeline.P=6", "grid.Ts=2,3"}),
                                           ds, "pinsker", true, "r");
  const auto& table = content_of(grid, "grid.csv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 1 + 6 + 10);

  // The report equals the direct library call.
  const auto pipeline = cli::pipeline_from(cfg, "pinsker", ds.N);
  const std::vector<NamedConfig> named{{"pinsker", pipeline}};
  const auto reports = benchmark_classifiers(ds, named, CvScheme::leave_one_session_out(), 0);
  std::ostringstream direct;
  io::write_report_csv(direct, reports);
  CHECK(content_of(files, "report.csv") == direct.str());
}

TEST_CASE("experiment outputs equal direct library calls") {
  SUBCASE("rates") {
    const auto files = cli::experiment_command(
        "rates", config_of({"rates.epsilons=0.3,0.2,0.1", "rates.trials=100", "rates.T=16", "rates.thetas=10", "seed=5"}),
        "e");
    const auto rows = parse_csv(content_of(files, "rates.csv"));
    CHECK(rows.size() == 3);
    for (const auto& r : rows) CHECK(r[2] > 0.0);
  }
  SUBCASE("consistency") {
    const auto cfg = config_of({"model.K=3", "model.T=3", "model.separation=0.3", "model.spread=0.05",
                                "consistency.Ns=64,128", "consistency.trials_per_class=20", "seed=9"});
    const auto files = cli::experiment_command("consistency", cfg, "e");
    const auto model = make_class_model(3, EllipsoidSpec(2.0, 10.0), 3, 0.3, 0.05, derive_seed(9, {1}));
    const std::vector<std::size_t> Ns{64, 128};
    const auto rows = consistency_experiment(model, Ns, 20, derive_seed(9, {2}), NoiseModel{});
    std::ostringstream direct;
    io::write_consistency_csv(direct, rows);
    CHECK(content_of(files, "consistency.csv") == direct.str());
  }
  CHECK_THROWS_WITH_AS((void)cli::experiment_command("nope", io::Config{}, "e"),
                       doctest::Contains("rates, adaptivity, consistency, phase"), ValidationError);
}

TEST_CASE("command-line exit codes and determinism") {
  const fs::path dir = fs::temp_directory_path() / "lfp_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string();
  const std::string synth_args = "synth --set data.N=32 --set data.trials_per_class=3 --set model.K=2 "
                                 "--set model.T=2 --seed 11 --out ";
  CHECK(run(synth_args + d + "/a.csv") == 0);
  CHECK(run(synth_args + d + "/b.csv") == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.meta") == slurp(dir / "b.meta"));
  // File output equals the in-process command output.
  const auto files = cli::synth_command(config_of({"data.N=32", "data.trials_per_class=3", "model.K=2",
                                                   "model.T=2", "seed=11"}),
                                        dir / "a.csv");
  CHECK(files[0].second == slurp(dir / "a.csv"));

  CHECK(run("experiment bogus --out " + d + "/e") == 2);
  CHECK(run("synth --set model.separation=1000 --out " + d + "/c.csv") == 2);
  CHECK(run("synth --set unknown.key=1 --out " + d + "/c.csv") == 2);
  CHECK(run("benchmark --pipeline bjs --grid --input " + d + "/a.csv --out " + d + "/r") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("synth --set model.K=2 --out /proc/forbidden/x.csv") == 3);
  CHECK_FALSE(fs::exists(dir / "c.csv"));
  fs::remove_all(dir);
}
