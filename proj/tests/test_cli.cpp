#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using std::filesystem::path;

namespace {

const path kWorkDir = std::filesystem::temp_directory_path() / "vacantwalk_cli_test";

struct CliResult {
  int code;
  std::string output;  // stdout + stderr
};

std::string read_file(const path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CliResult run_cli(const std::string& args) {
  std::filesystem::create_directories(kWorkDir);
  const path out = kWorkDir / "stdout.txt";
  const std::string cmd = std::string(VACANTWALK_BIN) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return CliResult{code, read_file(out)};
}

int count_lines(const std::string& s, bool data_only) {
  std::istringstream in(s);
  std::string line;
  int n = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') continue;
    if (data_only && !header_seen) {
      header_seen = true;
      continue;
    }
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("scan emits trials x multipliers data rows") {
  const path out = kWorkDir / "scan.csv";
  const auto r = run_cli("scan --graph hypercube --d 10 --eps 0.4 --multipliers 0.6,1.0,1.4 "
                         "--trials 5 --seed 7 --out " + out.string());
  REQUIRE(r.code == 0);
  const std::string csv = read_file(out);
  CHECK(count_lines(csv, true) == 15);
  CHECK(csv.find("d,n,multiplier,trial,vacant_size,L1,num_components,bad_count,seed") !=
        std::string::npos);
  CHECK(csv.find("config_hash=") != std::string::npos);
}

TEST_CASE("scan writes an svg when asked") {
  const path out = kWorkDir / "scan2.csv";
  const path svg = kWorkDir / "scan2.svg";
  const auto r = run_cli("scan --graph hypercube --d 8 --multipliers 0.5,1.0 --trials 4 --seed 2 "
                         "--out " + out.string() + " --svg " + svg.string());
  REQUIRE(r.code == 0);
  const std::string s = read_file(svg);
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("<polyline") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("scan --graph hypercube --d 8 --multipliers '' --trials 2").code == 2);
  CHECK(run_cli("scan --graph hypercube --d 8 --trials 2").code == 2);  // missing multipliers
  CHECK(run_cli("nonsense").code == 2);
  CHECK(run_cli("rv --graph random-regular --d 3").code == 2);  // missing --n
  CHECK(run_cli("scan --graph hypercube --d 8 --multipliers 1.0,0.5 --trials 2").code == 2);
  CHECK(run_cli("ruin --p 0.4 --q 0.4").code == 2);  // singular closed form
}

TEST_CASE("identical invocations produce byte-identical output") {
  const path a = kWorkDir / "rep_a.csv";
  const path b = kWorkDir / "rep_b.csv";
  const std::string args = "scan --graph hypercube --d 9 --eps 0.35 --multipliers 0.5,0.9,1.3 "
                           "--trials 8 --seed 12 --out ";
  REQUIRE(run_cli(args + a.string() + " --parallel 1").code == 0);
  REQUIRE(run_cli(args + b.string() + " --parallel 4").code == 0);
  const auto bytes_a = read_file(a);
  CHECK(!bytes_a.empty());
  CHECK(bytes_a == read_file(b));
}

TEST_CASE("rv reports T, R_v, p_v and the 2 + 2/d reference") {
  const path out = kWorkDir / "rv.csv";
  const auto r = run_cli("rv --graph hypercube --d 10 --out " + out.string());
  REQUIRE(r.code == 0);
  const std::string csv = read_file(out);
  CHECK(csv.find("graph,d,n,T,R_v,p_v,p_v_halfwidth,rv_ref,seed") != std::string::npos);
  CHECK(csv.find("hypercube,10,1024,154,2.44022429146") != std::string::npos);
  CHECK(csv.find(",2.2,") != std::string::npos);  // rv_ref column
}

TEST_CASE("mixing reports gap and both mixing times") {
  const path out = kWorkDir / "mixing.csv";
  const auto r = run_cli("mixing --graph hypercube --d 8 --out " + out.string());
  REQUIRE(r.code == 0);
  const std::string csv = read_file(out);
  CHECK(csv.find("graph,d,n,gap,T_exact,T_bound") != std::string::npos);
  CHECK(csv.find("hypercube,8,256,0.125,99,") != std::string::npos);
}

TEST_CASE("contract prints both comparison lines and small differences") {
  const path out = kWorkDir / "contract.csv";
  const auto r = run_cli("contract --n 32 --set-size 3 --seed 5 --out " + out.string());
  REQUIRE(r.code == 0);
  CHECK(r.output.find("start-specific difference") != std::string::npos);
  const std::string csv = read_file(out);
  CHECK(csv.find("start-specific") != std::string::npos);
  CHECK(csv.find("stationarized") != std::string::npos);
  // parse the start-specific difference column and require near equality
  std::istringstream in(csv);
  std::string line;
  bool checked = false;
  while (std::getline(in, line)) {
    if (line.rfind("start-specific", 0) == 0) {
      std::vector<std::string> cells;
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      REQUIRE(cells.size() == 10);
      CHECK(std::stod(cells[8]) <= 1e-10);
      checked = true;
    }
  }
  CHECK(checked);
}

TEST_CASE("properties prints one verdict line per property") {
  const path out = kWorkDir / "props.csv";
  const auto r = run_cli("properties --graph hypercube --d 8 --eps 0.3 --p4-samples 300 --out " +
                         out.string());
  REQUIRE(r.code == 0);
  for (const char* p : {"P1 ", "P2 ", "P3 ", "P4 "}) CHECK(r.output.find(p) != std::string::npos);
  const std::string csv = read_file(out);
  CHECK(count_lines(csv, true) == 4);
}

TEST_CASE("ruin evaluates the closed form") {
  const path out = kWorkDir / "ruin.csv";
  const auto r = run_cli("ruin --p 0.666666666666667 --q 0.333333333333333 --ell 3 --j 1 --out " +
                         out.string());
  REQUIRE(r.code == 0);
  CHECK(read_file(out).find("0.428571428571") != std::string::npos);  // 3/7
}

TEST_CASE("firstvisit fits the survival decay") {
  const path out = kWorkDir / "fv.csv";
  const auto r = run_cli("firstvisit --graph hypercube --d 8 --trials 400 --tmax 2048 --seed 4 "
                         "--parallel 2 --out " + out.string());
  REQUIRE(r.code == 0);
  const std::string csv = read_file(out);
  CHECK(csv.find("# fitted_rate=") != std::string::npos);
  CHECK(csv.find("# predicted_rate=") != std::string::npos);
  CHECK(csv.find("t,survivors,survival,se") != std::string::npos);
}

TEST_CASE("whichvertex reports the conditioned split") {
  const path out = kWorkDir / "wv.csv";
  const auto r = run_cli("whichvertex --graph hypercube --d 8 --targets 1,2 --trials 1500 "
                         "--seed 5 --parallel 2 --out " + out.string());
  REQUIRE(r.code == 0);
  const std::string csv = read_file(out);
  CHECK(csv.find("vertex,hits,freq,se") != std::string::npos);
  CHECK(csv.find("# conditioned=") != std::string::npos);
}

TEST_CASE("config files feed defaults and flags override them") {
  const path cfg = kWorkDir / "exp.cfg";
  {
    std::ofstream out(cfg);
    out << "# experiment config\n";
    out << "graph=hypercube\n";
    out << "d=9\n";
    out << "seed=31\n";
  }
  const path a = kWorkDir / "cfg_a.csv";
  const auto r = run_cli("rv --config " + cfg.string() + " --out " + a.string());
  REQUIRE(r.code == 0);
  CHECK(read_file(a).find("hypercube,9,512,") != std::string::npos);

  const path b = kWorkDir / "cfg_b.csv";
  const auto r2 = run_cli("rv --config " + cfg.string() + " --d 7 --out " + b.string());
  REQUIRE(r2.code == 0);
  CHECK(read_file(b).find("hypercube,7,128,") != std::string::npos);
}
