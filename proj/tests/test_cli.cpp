// End-to-end tests against the installed binary (path in $ALOHA_BIN).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CmdResult run_cli(const std::string& args) {
  static int counter = 0;
  const char* bin = std::getenv("ALOHA_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "ALOHA_BIN must point at the CLI binary");
  const std::string errfile = "/tmp/aloha_cli_err_" +
                              std::to_string(::getpid()) + "_" +
                              std::to_string(counter++);
  const std::string cmd = std::string(bin) + " " + args + " 2>" + errfile;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult res;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
  const int status = ::pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  res.err = slurp(errfile);
  std::remove(errfile.c_str());
  return res;
}

// Value of the first data row whose first field equals `name`.
double row_value(const std::string& csv, const std::string& name) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(name + ",", 0) == 0)
      return std::stod(line.substr(name.size() + 1));
  }
  FAIL("no row named ", name, " in output:\n", csv);
  return 0.0;
}

std::vector<std::pair<double, double>> data_rows(const std::string& csv) {
  std::vector<std::pair<double, double>> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto c = line.find(',');
    if (c == std::string::npos) continue;
    try {
      rows.emplace_back(std::stod(line.substr(0, c)),
                        std::stod(line.substr(c + 1)));
    } catch (const std::exception&) {
      // header row
    }
  }
  return rows;
}

fs::path fresh_dir(const char* tag) {
  fs::path dir = fs::path("/tmp") / (std::string("aloha_cli_") + tag + "_" +
                                     std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("eval zeta prints the closed form") {
  const auto res = run_cli("eval --quantity zeta --beta 4");
  CHECK(res.exit_code == 0);
  CHECK(res.out.rfind("# command = eval", 0) == 0);
  CHECK(row_value(res.out, "zeta") == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("eval rejects beta at the domain boundary") {
  const auto res = run_cli("eval --quantity kappa --beta 2");
  CHECK(res.exit_code == 1);
  CHECK(res.err.find("beta must exceed 2") != std::string::npos);
}

TEST_CASE("eval coverage matches the slotted Rayleigh closed form") {
  const auto res = run_cli(
      "eval --quantity coverage --mac slotted --fading rayleigh "
      "--lambda 1 --p 0.05 --T 10 --beta 4");
  CHECK(res.exit_code == 0);
  CHECK(row_value(res.out, "coverage") ==
        doctest::Approx(0.4582865).epsilon(2e-6));
}

TEST_CASE("dB threshold flag is equivalent to the linear one") {
  const auto lin = run_cli("eval --quantity coverage --T 10");
  const auto db = run_cli("eval --quantity coverage --T-db 10");
  CHECK(lin.exit_code == 0);
  CHECK(db.exit_code == 0);
  CHECK(lin.out == db.out);
}

TEST_CASE("simulate output is seed-deterministic") {
  const std::string args =
      "simulate --mac slotted --replications 200 --window-side 50 --seed 7";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  const auto c = run_cli(
      "simulate --mac slotted --replications 200 --window-side 50 --seed 8");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("simulate renewal reports mean, max, and access fraction") {
  const auto res = run_cli(
      "simulate --mac renewal --B 1 --epsilon 0.0526 --replications 300 "
      "--window-side 40 --seed 3");
  CHECK(res.exit_code == 0);
  const double mean = row_value(res.out, "coverage_mean");
  const double mx = row_value(res.out, "coverage_max");
  const double on = row_value(res.out, "on_fraction");
  CHECK(mx <= mean);
  CHECK(on == doctest::Approx(0.05).epsilon(0.2));
}

TEST_CASE("simulate requires at least two replications") {
  const auto res = run_cli("simulate --replications 1");
  CHECK(res.exit_code == 1);
  CHECK(res.err.find("replications") != std::string::npos);
}

TEST_CASE("echoed config reproduces the file byte for byte") {
  const auto dir = fresh_dir("roundtrip");
  const std::string f1 = (dir / "first.csv").string();
  const std::string f2 = (dir / "second.csv").string();
  const auto a = run_cli("eval --quantity coverage --mac rain --tau 0.1 "
                         "--lambda 0.7 --T-db 8 --out " + f1);
  REQUIRE(a.exit_code == 0);
  const auto b = run_cli("eval --config " + f1 + " --out " + f2);
  REQUIRE(b.exit_code == 0);
  CHECK(slurp(f1) == slurp(f2));
  CHECK(!slurp(f1).empty());
  fs::remove_all(dir);
}

TEST_CASE("flags override config file values") {
  const auto dir = fresh_dir("precedence");
  const std::string f1 = (dir / "base.csv").string();
  REQUIRE(run_cli("eval --quantity zeta --beta 3 --out " + f1).exit_code == 0);
  const auto res = run_cli("eval --config " + f1 + " --beta 4");
  CHECK(res.exit_code == 0);
  CHECK(row_value(res.out, "zeta") == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
  fs::remove_all(dir);
}

TEST_CASE("validate fast passes on a healthy build") {
  const auto res = run_cli("validate --level fast");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("PASS") != std::string::npos);
  CHECK(res.out.find("FAIL") == std::string::npos);
}

TEST_CASE("validate detects a perturbed contention constant") {
  const auto res = run_cli("validate --level fast --kappa-perturb 1.01");
  CHECK(res.exit_code == 3);
  CHECK(res.out.find("FAIL") != std::string::npos);
}

TEST_CASE("reproduce fig1 writes a monotone curve") {
  const auto dir = fresh_dir("fig1");
  const auto res = run_cli("reproduce fig1_zeta --out " + dir.string());
  CHECK(res.exit_code == 0);
  const std::string csv = slurp((dir / "fig1_zeta_zeta.csv").string());
  REQUIRE(!csv.empty());
  CHECK(csv[0] == '#');
  CHECK(csv.find("# figure = fig1_zeta") != std::string::npos);
  const auto rows = data_rows(csv);
  REQUIRE(rows.size() > 100);
  CHECK(rows.front().second ==
        doctest::Approx(2 * 2.05 / (2 + 2.05)).epsilon(1e-9));
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].second > rows[i - 1].second);
  CHECK(rows.back().second < 2.0);
  fs::remove_all(dir);
}

TEST_CASE("simulation-backed figures demand explicit replications") {
  const auto dir = fresh_dir("fig6");
  const auto res = run_cli("reproduce fig6_mean_vs_max_tau --out " + dir.string());
  CHECK(res.exit_code == 1);
  CHECK(res.err.find("replications") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("unknown figure names are usage errors") {
  const auto res = run_cli("reproduce fig9_unknown");
  CHECK(res.exit_code == 1);
  CHECK(res.err.find("unknown figure") != std::string::npos);
}
