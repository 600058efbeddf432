#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "vbsa_cli_test";

int run(const std::string& args) {
  fs::create_directories(kDir);
  const std::string cmd = std::string(VBSA_CLI_PATH) + " " + args + " >>" + (kDir / "log.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("help and version") {
  CHECK(run("--help") == 0);
  CHECK(run("--version") == 0);
  CHECK(run("bench --help") == 0);
}

TEST_CASE("usage errors") {
  CHECK(run("bench --no-such-flag 1") == 2);
  CHECK(run("estimate --function G --k 3") == 2);
  CHECK(run("estimate --function D9") == 2);
  CHECK(run("frobnicate") != 0);
  std::ofstream(kDir / "bad.cfg") << "function = A1\nbogus_key = 3\n";
  CHECK(run("--config " + (kDir / "bad.cfg").string() + " estimate") == 2);
}

TEST_CASE("config file values are overridden by flags") {
  const auto out = kDir / "cfg";
  fs::remove_all(out);
  std::ofstream(kDir / "run.cfg") << "function = B1\nk = 3\np = 4\nout_dir = " << out.string() << "\n";
  CHECK(run("--config " + (kDir / "run.cfg").string() + " estimate --function A1") == 0);
  CHECK(fs::exists(out / "estimate_A1_saltenis.csv"));
  CHECK_FALSE(fs::exists(out / "estimate_B1_saltenis.csv"));
  // header plus one line per factor
  const auto text = slurp(out / "estimate_A1_saltenis.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

TEST_CASE("rerunning a bench overwrites with identical bytes") {
  const auto out = kDir / "bench";
  fs::remove_all(out);
  const std::string args = "bench --function A2 --estimators saltenis,glen_isaacs --p-min 3 --p-max 6 --reps 5 --out-dir " +
                           out.string();
  REQUIRE(run(args) == 0);
  const auto csv = slurp(out / "bench_A2.csv");
  const auto svg = slurp(out / "bench_A2.svg");
  CHECK_FALSE(csv.empty());
  CHECK(svg.find("<svg") != std::string::npos);
  REQUIRE(run(args) == 0);
  CHECK(slurp(out / "bench_A2.csv") == csv);
  CHECK(slurp(out / "bench_A2.svg") == svg);
}

TEST_CASE("metrics, analytic and discrepancy") {
  const auto out = kDir / "misc";
  fs::remove_all(out);
  CHECK(run("metrics --k 6 --budget 500 --out-dir " + out.string()) == 0);
  const auto table = slurp(out / "metrics_k6_budget500.csv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 8);
  CHECK(fs::exists(out / "explorativity_economy_k6.svg"));
  CHECK(run("analytic --function C2 --k 4 --out-dir " + out.string()) == 0);
  CHECK(fs::exists(out / "analytic_C2_k4.csv"));
  CHECK(run("discrepancy --dims 6 --p 7") == 0);
}
