// Black-box checks of the command-line tool: exit codes, seed determinism,
// and documented defaults. The binary and data paths arrive via the
// GENRANK_CLI_BIN / GENRANK_DATA_DIR environment variables.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
  const char* env = std::getenv("GENRANK_CLI_BIN");
  return env ? env : "./genrank";
}

std::string data_dir() {
  const char* env = std::getenv("GENRANK_DATA_DIR");
  return env ? env : "../data";
}

int run(const std::string& args, const fs::path& stdout_file = {}) {
  std::string cmd = "\"" + cli_path() + "\" " + args;
  cmd += stdout_file.empty() ? " > /dev/null 2>&1"
                             : " > \"" + stdout_file.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("exit codes: 0 success, 2 input error") {
  const fs::path tmp = fs::temp_directory_path();
  const std::string analyze = "analyze --input \"" + data_dir() +
                              "/toy_study.csv\" --schema \"" + data_dir() +
                              "/toy_schema.json\"";
  CHECK(run(analyze + " --seed 1 --output \"" +
            (tmp / "cli_ok.json").string() + "\"") == 0);
  CHECK(run("analyze --input missing.csv --schema missing.json") == 2);
  CHECK(run(analyze + " --kernel mallows --topk 2") == 2);  // stray flag
  CHECK(run("enumerate --na 9 --ties") == 2);               // size guard
  CHECK(run("no-such-subcommand") == 2);
  CHECK(run("--help") == 0);
  std::error_code ec;
  fs::remove(tmp / "cli_ok.json", ec);
}

TEST_CASE("every subcommand honors --seed with identical outputs") {
  const fs::path tmp = fs::temp_directory_path();
  const fs::path a = tmp / "cli_seed_a.out";
  const fs::path b = tmp / "cli_seed_b.out";

  SUBCASE("analyze") {
    const std::string args = "analyze --input \"" + data_dir() +
                             "/toy_study.csv\" --schema \"" + data_dir() +
                             "/toy_schema.json\" --seed 11 --nrep 60 --output ";
    CHECK(run(args + "\"" + a.string() + "\"") == 0);
    CHECK(run(args + "\"" + b.string() + "\"") == 0);
    CHECK(slurp(a) == slurp(b));
  }
  SUBCASE("plan") {
    const std::string args = "plan --na 3 --n0 8 --seed 11 --nrep 40";
    CHECK(run(args, a) == 0);
    CHECK(run(args, b) == 0);
    CHECK(slurp(a) == slurp(b));
  }
  SUBCASE("simulate") {
    const std::string args =
        "simulate --na 3 --sizes 10 --reps 4 --seed 11 --nrep 40 --nstar-rep 300";
    CHECK(run(args, a) == 0);
    CHECK(run(args, b) == 0);
    CHECK(slurp(a) == slurp(b));
  }
  SUBCASE("demo-significance") {
    const std::string args = "demo-significance --reps 30 --seed 11 --nrep 40";
    CHECK(run(args, a) == 0);
    CHECK(run(args, b) == 0);
    CHECK(slurp(a) == slurp(b));
  }
  SUBCASE("GENRANK_SEED fallback matches --seed") {
    CHECK(run("plan --na 3 --n0 8 --seed 21 --nrep 40", a) == 0);
    const std::string cmd = "GENRANK_SEED=21 \"" + cli_path() +
                            "\" plan --na 3 --n0 8 --nrep 40 > \"" + b.string() +
                            "\" 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(slurp(a) == slurp(b));
  }
  std::error_code ec;
  fs::remove(a, ec);
  fs::remove(b, ec);
}

TEST_CASE("--help documents the defaults") {
  const fs::path tmp = fs::temp_directory_path() / "cli_help.out";
  CHECK(run("analyze --help", tmp) == 0);
  const std::string help = slurp(tmp);
  CHECK(help.find("0.95") != std::string::npos);   // alpha*
  CHECK(help.find("0.05") != std::string::npos);   // delta*
  CHECK(help.find("100") != std::string::npos);    // n_rep
  CHECK(help.find("0.8") != std::string::npos);    // coverage
  std::error_code ec;
  fs::remove(tmp, ec);
}
