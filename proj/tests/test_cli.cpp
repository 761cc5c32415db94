#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "towpde/io.hpp"
#include "towpde/rng.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("towpde_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args, const fs::path& scratch,
                  const std::string& env_prefix = "") {
  fs::path out = scratch / "stdout.txt";
  fs::path err = scratch / "stderr.txt";
  std::string cmd = env_prefix + std::string(TOWPDE_CLI_PATH) + " " + args + " >" +
                    out.string() + " 2>" + err.string();
  int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string slurp_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSolveConstantConfig = R"(
[domain]
kind = interval
a = 0
b = 1
[params]
n = 1
eps = 0.2
p = 2
T = 0.1
[data]
f = constant
value = 1
)";

const char* kSimulateConfig = R"(
[domain]
kind = interval
a = 0
b = 1
[params]
n = 1
eps = 0.2
p = 2
T = 0.1
[data]
f = heat_eigen
[mc]
samples = 400
seed = 7
[run]
start = 0.5
t0 = 0.1
)";

}  // namespace

TEST_CASE("shortest round-trip formatting parses back bit-exactly") {
  towpde::Xoshiro256pp rng(99, 0);
  for (int i = 0; i < 20000; ++i) {
    double mag = std::pow(10.0, 40.0 * (rng.uniform01() - 0.5));
    double v = (rng.uniform01() - 0.5) * mag;
    std::string s = towpde::format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("solve with constant data writes an all-ones value column") {
  fs::path dir = fresh_dir("solve");
  write_file(dir / "run.ini", kSolveConstantConfig);
  CliResult r = run_cli("solve --config " + (dir / "run.ini").string() + " --out " +
                            (dir / "out").string() + " --quiet",
                        dir);
  CHECK(r.exit_code == 0);

  auto lines = read_lines(dir / "out" / "solution.csv");
  REQUIRE(lines.size() > 2);
  CHECK(lines[0] == "# schema: towpde.grid.v1");
  CHECK(lines[1] == "level,t,x1,value");
  for (std::size_t i = 2; i < lines.size(); ++i) {
    auto comma = lines[i].rfind(',');
    CHECK(lines[i].substr(comma + 1) == "1");
  }
  CHECK(fs::exists(dir / "out" / "meta.json"));
  auto meta = slurp_bytes(dir / "out" / "meta.json");
  CHECK(meta.find("\"schema\": \"towpde.meta.v1\"") != std::string::npos);
  CHECK(meta.find("wall_time_seconds") != std::string::npos);
}

TEST_CASE("simulate rejects sample counts below two with exit code 2") {
  fs::path dir = fresh_dir("badm");
  std::string cfg(kSimulateConfig);
  cfg.replace(cfg.find("samples = 400"), 13, "samples = 0  ");
  write_file(dir / "run.ini", cfg);
  CliResult r = run_cli("simulate --config " + (dir / "run.ini").string() + " --out " +
                            (dir / "out").string() + " --quiet",
                        dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("M >= 2 required") != std::string::npos);
}

TEST_CASE("identical config and seed produce byte-identical artifacts") {
  fs::path dir = fresh_dir("repro");
  write_file(dir / "run.ini", kSimulateConfig);
  // The second run also pins the worker count through the environment; the
  // artifacts must not depend on it.
  const char* prefixes[] = {"", "TOWPDE_THREADS=1 "};
  const char* outs[] = {"out1", "out2"};
  for (int i = 0; i < 2; ++i) {
    CliResult r = run_cli("simulate --config " + (dir / "run.ini").string() + " --out " +
                              (dir / outs[i]).string() + " --quiet --seed 7",
                          dir, prefixes[i]);
    REQUIRE(r.exit_code == 0);
  }
  CHECK(slurp_bytes(dir / "out1" / "estimates.csv") ==
        slurp_bytes(dir / "out2" / "estimates.csv"));
  auto lines = read_lines(dir / "out1" / "estimates.csv");
  REQUIRE(!lines.empty());
  CHECK(lines[0] == "# schema: towpde.estimates.v1");
}

TEST_CASE("converge emits a decreasing two-row error table") {
  fs::path dir = fresh_dir("conv");
  write_file(dir / "run.ini", std::string(R"(
[domain]
kind = interval
a = 0
b = 1
[params]
n = 1
eps = 0.2
p = 2
T = 0.1
[data]
f = heat_eigen
[run]
eps_list = 0.2 0.1
)"));
  CliResult r = run_cli("converge --config " + (dir / "run.ini").string() + " --out " +
                            (dir / "out").string() + " --quiet",
                        dir);
  CHECK(r.exit_code == 0);
  auto lines = read_lines(dir / "out" / "error_table.csv");
  REQUIRE(lines.size() == 4);  // schema, header, two rows
  CHECK(lines[0] == "# schema: towpde.error_table.v1");
  auto field = [](const std::string& line, int idx) {
    std::stringstream ss(line);
    std::string tok;
    for (int i = 0; i <= idx; ++i) std::getline(ss, tok, ',');
    return std::stod(tok);
  };
  CHECK(field(lines[2], 0) == 0.2);
  CHECK(field(lines[3], 0) == 0.1);
  CHECK(field(lines[3], 2) < field(lines[2], 2));
}

TEST_CASE("numerical failures exit with code 3") {
  fs::path dir = fresh_dir("numfail");
  write_file(dir / "run.ini", std::string(R"(
[domain]
kind = interval
a = -1
b = 1
[params]
n = 1
eps = 0.1
p = 2
T = 1
[data]
f = linear
coeffs = 0 1
[run]
tol = 1e-12
max_iter = 2
)"));
  CliResult r = run_cli("elliptic --config " + (dir / "run.ini").string() + " --out " +
                            (dir / "out").string() + " --quiet",
                        dir);
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("no convergence") != std::string::npos);
}

TEST_CASE("config and argument errors exit with code 2") {
  fs::path dir = fresh_dir("errs");
  write_file(dir / "bad.ini", "[domain\nkind=interval\n");
  CliResult malformed = run_cli("solve --config " + (dir / "bad.ini").string(), dir);
  CHECK(malformed.exit_code == 2);

  CliResult unknown = run_cli("frobnicate --config x.ini", dir);
  CHECK(unknown.exit_code == 2);

  write_file(dir / "run.ini", kSolveConstantConfig);
  CliResult missing = run_cli("solve --config " + (dir / "does_not_exist.ini").string(), dir);
  CHECK(missing.exit_code == 2);
}
