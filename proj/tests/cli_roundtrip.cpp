// End-to-end CLI checks: exit codes, JSON shape, suite aggregation with the
// headline ratio lines.  argv[1] = path to the asdm binary, argv[2] = the
// shipped suite config.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cmd(const std::string& cmd) {
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return {-1, ""};
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: cli_roundtrip <asdm-binary> <suite-config>\n";
    return 2;
  }
  const std::string bin = argv[1];
  const std::string suite_config = argv[2];
  const fs::path tmp = fs::temp_directory_path() / "asdm_cli_test";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  // count: exit 0, JSON with total_signed_count 6
  {
    const auto r = run_cmd(bin + " count --L 1e-2 --K 1 --alpha 1 --seed 7 " +
                           "--out " + (tmp / "count.json").string());
    check(r.exit_code == 0, "count exits 0");
    nlohmann::json doc = nlohmann::json::parse(slurp(tmp / "count.json"));
    check(doc.at("result").at("total_signed_count") == 6,
          "count JSON has total_signed_count 6");
    check(doc.at("schema_version") == 1, "schema_version present");
  }

  // ip reduced: value ~ 1
  {
    const auto r = run_cmd(bin + " ip --method reduced --out " +
                           (tmp / "ip.json").string());
    check(r.exit_code == 0, "ip --method reduced exits 0");
    nlohmann::json doc = nlohmann::json::parse(slurp(tmp / "ip.json"));
    const double v = doc.at("result").at("value").get<double>();
    check(std::abs(v - 1.0) < 1e-3, "ip value ~ 1");
  }

  // toy --L 0: exactly zero
  {
    const auto r =
        run_cmd(bin + " toy --L 0 --out " + (tmp / "toy0.json").string());
    check(r.exit_code == 0, "toy --L 0 exits 0");
    nlohmann::json doc = nlohmann::json::parse(slurp(tmp / "toy0.json"));
    check(doc.at("result").at("value").get<double>() == 0.0,
          "toy L=0 value is exactly 0");
  }

  // determinism: same spec + seed -> byte-identical JSON
  {
    run_cmd(bin + " degenerate --alpha 1.5 --seed 9 --out " +
            (tmp / "d1.json").string());
    run_cmd(bin + " degenerate --alpha 1.5 --seed 9 --out " +
            (tmp / "d2.json").string());
    check(slurp(tmp / "d1.json") == slurp(tmp / "d2.json"),
          "identical spec+seed gives byte-identical JSON");
  }

  // unknown flag: validation exit code 2
  {
    const auto r = run_cmd(bin + " count --no-such-flag 1");
    check(r.exit_code == 2, "unknown flag exits 2");
  }

  // forced certificate failure: degenerate run with alpha 1.5 must count 4,
  // so demanding it through `count` (which expects 6) exits 3
  {
    fs::path bg = tmp / "degenerate_bg.json";
    {
      const auto mk = run_cmd(bin + " degenerate --alpha 1.5 --seed 9 --out " +
                              (tmp / "d3.json").string());
      check(mk.exit_code == 0, "degenerate run exits 0");
      nlohmann::json doc = nlohmann::json::parse(slurp(tmp / "d3.json"));
      std::ofstream os(bg);
      os << doc.at("config").at("background").dump();
    }
    const auto r = run_cmd(bin + " count --alpha 1.5 --background " +
                           bg.string() + " --out " +
                           (tmp / "forced.json").string());
    check(r.exit_code == 3, "count on a degenerate background exits 3");
  }

  // suite: aggregate summary contains the 6/64 and 1/8 headlines
  {
    const auto r = run_cmd(bin + " suite --config " + suite_config +
                           " --out-dir " + (tmp / "suite").string());
    check(r.exit_code == 0, "paper suite exits 0");
    check(r.output.find("6/64") != std::string::npos,
          "suite output mentions 6/64");
    check(r.output.find("1/8") != std::string::npos,
          "suite output mentions 1/8");
    nlohmann::json agg =
        nlohmann::json::parse(slurp(tmp / "suite" / "suite_summary.json"));
    check(agg.at("headline").at("geometric_boundary_contribution") == "6/64",
          "aggregate headline 6/64");
    check(agg.at("exit_code") == 0, "aggregate exit code 0");
    check(fs::exists(tmp / "suite" / "suite_batch.csv"), "batch CSV written");
  }

  // suite with one failing experiment exits with the max sub-code (3)
  {
    nlohmann::json bg =
        nlohmann::json::parse(slurp(tmp / "degenerate_bg.json"));
    nlohmann::json cfg;
    cfg["specs"] = nlohmann::json::array();
    nlohmann::json bad;
    bad["command"] = "count";
    bad["params"] = {{"alpha", 1.5}, {"background", bg}};
    bad["seed"] = 1;
    cfg["specs"].push_back(bad);
    std::ofstream os(tmp / "failing_suite.json");
    os << cfg.dump();
    os.close();
    const auto r = run_cmd(bin + " suite --config " +
                           (tmp / "failing_suite.json").string() +
                           " --out-dir " + (tmp / "failing_out").string());
    check(r.exit_code == 3, "suite with a failing certificate exits 3");
  }

  // empty suite: exit 0, empty summary
  {
    std::ofstream os(tmp / "empty.json");
    os << "{\"specs\":[]}";
    os.close();
    const auto r = run_cmd(bin + " suite --config " +
                           (tmp / "empty.json").string() + " --out-dir " +
                           (tmp / "empty_out").string());
    check(r.exit_code == 0, "empty suite exits 0");
  }

  if (g_failures == 0) {
    std::printf("cli_roundtrip: all checks passed\n");
    return 0;
  }
  std::printf("cli_roundtrip: %d check(s) failed\n", g_failures);
  return 1;
}
