// End-to-end exercise of the command-line binary: exit-code contract,
// --list output, config handling and report determinism.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int failures = 0;
std::string cli;

int run_cli(const std::string& args) {
  const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void expect(bool ok, const std::string& what) {
  std::printf("%-64s %s\n", what.c_str(), ok ? "ok" : "FAILED");
  if (!ok) ++failures;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string strip_volatile(const std::string& text) {
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.find("\"timestamp\"") == std::string::npos &&
        line.find("\"version\"") == std::string::npos)
      out += line + "\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli>\n", argv[0]);
    return 2;
  }
  cli = argv[1];
  const fs::path work = fs::temp_directory_path() / "vocheck_e2e";
  fs::remove_all(work);
  fs::create_directories(work);

  expect(run_cli("--list") == 0, "--list exits 0");
  expect(run_cli("--list --json") == 0, "--list --json exits 0");
  expect(run_cli("") == 64, "no arguments is a usage error (64)");
  expect(run_cli("--scenario no-such-thing") == 64, "unknown scenario exits 64");
  expect(run_cli("--config " + (work / "missing.json").string()) == 64,
         "missing config file exits 64");
  expect(run_cli("--scenario metzler-random --seed 3 --out " + (work / "pass").string()) == 0,
         "satisfied instance exits 0");
  expect(run_cli("--scenario metzler-random --seed 1 --out " + (work / "fail").string()) == 2,
         "violated instance exits 2");
  expect(run_cli("--scenario metzler-random --seed 3 --out /dev/null/sub") == 74,
         "unwritable output exits 74");

  {
    std::ofstream cfg(work / "run.json");
    cfg << R"({"scenario": "metzler-random", "params": {"n": 4}, "seed": 3,
               "formats": ["json", "csv"], "out_dir": ")"
        << (work / "cfg").string() << R"("})";
  }
  expect(run_cli("--config " + (work / "run.json").string()) == 0,
         "config-file driven run exits 0");
  expect(fs::exists(work / "cfg" / "report.json") && fs::exists(work / "cfg" / "report.csv"),
         "config run wrote both report formats");

  const std::string base =
      "--scenario delay --seed 5 --format both --out ";
  run_cli(base + (work / "det_a").string());
  run_cli(base + (work / "det_b").string());
  expect(strip_volatile(read_file(work / "det_a" / "report.json")) ==
             strip_volatile(read_file(work / "det_b" / "report.json")),
         "repeated runs: JSON byte-identical modulo volatile fields");
  expect(read_file(work / "det_a" / "report.csv") == read_file(work / "det_b" / "report.csv"),
         "repeated runs: CSV byte-identical");

  if (failures) std::printf("%d end-to-end check(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
