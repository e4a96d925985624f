#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qsine/run.hpp"

using namespace qsine;

namespace {
std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("qsine_run_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

nlohmann::json manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  return nlohmann::json::parse(in);
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("list parsing and formatting") {
    CHECK(parse_real_list("1,2.5,4") == std::vector<double>{1.0, 2.5, 4.0});
    const std::vector<double> r = parse_real_list("1.05:0.05:1.2");
    REQUIRE(r.size() == 4);
    CHECK(r.back() == doctest::Approx(1.2));
    CHECK_THROWS_AS(parse_real_list("1,x"), UsageError);
    CHECK_THROWS_AS(parse_real_list("3:-1:5"), UsageError);
    CHECK(format_real(0.1) == "0.10000000000000001");
  }

  TEST_CASE("params reject bad values and unused keys") {
    Params p("basis", {{"q", "3"}, {"N", "x"}, {"p", "2"}});
    CHECK(p.real("q") == 3.0);
    CHECK_THROWS_AS(p.count("N"), UsageError);
    CHECK_THROWS_AS(p.reject_unused(), UsageError);
    CHECK(!command_params("evolve").empty());
    CHECK_THROWS_AS(command_params("nope"), UsageError);
  }

  TEST_CASE("usage errors map to exit code 2 and are recorded") {
    std::ostringstream log;
    RunConfig bad;
    bad.command = "basis";
    bad.params = {{"q", "0.5"}};
    bad.output_dir = scratch("bad");
    const RunResult r = run(bad, log);
    CHECK(r.exit_code == exit_usage);
    CHECK(manifest(bad.output_dir)["status"] != "ok");

    RunConfig unknown;
    unknown.command = "fly";
    unknown.output_dir = scratch("unknown");
    CHECK(run(unknown, log).exit_code == exit_usage);

    RunConfig unseeded;
    unseeded.command = "approx-sweep";
    unseeded.params = {{"g", "random"}, {"N", "5"}, {"q_grid", "2"}};
    unseeded.output_dir = scratch("unseeded");
    CHECK(run(unseeded, log).exit_code == exit_usage);
  }

  TEST_CASE("commands write their outputs and a manifest") {
    std::ostringstream log;
    RunConfig cfg;
    cfg.command = "poisson-solve";
    cfg.params = {{"p", "5"}, {"q", "4"}, {"N", "10"}, {"g", "gb"}};
    cfg.output_dir = scratch("solve");
    const RunResult r = run(cfg, log);
    CHECK(r.exit_code == exit_ok);
    const nlohmann::json m = manifest(cfg.output_dir);
    CHECK(m["status"] == "ok");
    CHECK(m["params"]["pairing"] == "primal");
    for (const auto& name : m["outputs"]) CHECK(std::filesystem::exists(cfg.output_dir / name.get<std::string>()));
    CHECK(m["results"]["converged"] == true);

    RunConfig low;
    low.command = "basis";
    low.params = {{"q", "1.05"}, {"N", "4"}};
    low.output_dir = scratch("low_q");
    CHECK(run(low, log).exit_code == exit_ok);
    CHECK(manifest(low.output_dir)["results"]["warnings"].size() == 1);

    RunConfig sweep;
    sweep.command = "approx-sweep";
    sweep.params = {{"g", "gb"}, {"N", "40"}, {"q_grid", "3,4.25,6"}};
    sweep.output_dir = scratch("sweep");
    CHECK(run(sweep, log).exit_code == exit_ok);
    CHECK(manifest(sweep.output_dir)["results"]["q_opt"]["primal"] == doctest::Approx(4.25));
  }
}
