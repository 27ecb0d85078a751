// End-to-end checks of the command-line tool: exit-code contract, file
// output determinism, config/flag precedence.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef ZSQ_CLI_PATH
#error "ZSQ_CLI_PATH must point at the zsq binary"
#endif

namespace {

namespace fs = std::filesystem;

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const std::string tmp =
      (fs::temp_directory_path() / "zsq_cli_out.txt").string();
  const std::string cmd =
      std::string(ZSQ_CLI_PATH) + " " + args + " > " + tmp + " 2>&1";
  const int status = std::system(cmd.c_str());
  CommandResult r;
#ifdef _WIN32
  r.exit_code = status;
#else
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
  std::ifstream in(tmp, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("point: reference parameters report the squeezing target") {
  const CommandResult r =
      run_cli("point --tau-bar 2.827433388230814 --g-bar 1 --dp-bar 0.4");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("status = ok") != std::string::npos);
  CHECK(r.output.find("tanh_r = 5.42004309996338") != std::string::npos);
  CHECK(r.output.find("gamma_5") != std::string::npos);
  CHECK(r.output.find("rate = 4.3349196202328") != std::string::npos);
}

TEST_CASE("point: degenerate parameters exit with code 2") {
  const CommandResult pi_point =
      run_cli("point --tau-bar 3.14159265358979312 --g-bar 1 --dp-bar 1");
  CHECK(pi_point.exit_code == 2);
  CHECK(pi_point.output.find("status = no_distillation") !=
        std::string::npos);
  CHECK(pi_point.output.find("reason = ") != std::string::npos);

  const CommandResult zero_g =
      run_cli("point --tau-bar 1.3 --g-bar 0 --dp-bar 0.7");
  CHECK(zero_g.exit_code == 2);
}

TEST_CASE("point: missing required parameters exit with code 1") {
  const CommandResult r = run_cli("point --g-bar 1");
  CHECK(r.exit_code == 1);
}

TEST_CASE("unknown subcommand exits with code 1") {
  const CommandResult r = run_cli("frobnicate");
  CHECK(r.exit_code == 1);
}

TEST_CASE("sweep: CSV output is byte-deterministic") {
  const fs::path out1 = temp_file("zsq_sweep1.csv");
  const fs::path out2 = temp_file("zsq_sweep2.csv");
  const std::string args =
      "sweep --grid tau-bar=0.5:6.0:12 --grid g-bar=0.4:1.6:5 --dp-bar 1 "
      "--quantity both --out ";
  CHECK(run_cli(args + out1.string()).exit_code == 0);
  CHECK(run_cli(args + out2.string()).exit_code == 0);
  const std::string a = slurp(out1);
  CHECK(a == slurp(out2));
  CHECK(a.find("tau_bar,g_bar,dp_bar,rate,tanh_r,status") == 0);
  // 12*5 points plus the header line, LF endings only.
  CHECK(std::count(a.begin(), a.end(), '\n') == 61);
  CHECK(a.find('\r') == std::string::npos);
  fs::remove(out1);
  fs::remove(out2);
}

TEST_CASE("sweep: degenerate grid rows are reported, not fatal") {
  const fs::path out = temp_file("zsq_sweep_deg.csv");
  // tau axis crossing pi exactly at the middle point.
  const CommandResult r = run_cli(
      "sweep --grid tau-bar=1.5707963267948966:4.71238898038469:3 "
      "--g-bar 1 --dp-bar 1 --out " +
      out.string());
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.find("degenerate") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  fs::remove(out);
}

TEST_CASE("sweep without a grid axis is a usage error") {
  const CommandResult r = run_cli("sweep --tau-bar 1 --g-bar 1 --dp-bar 1");
  CHECK(r.exit_code == 1);
}

TEST_CASE("run: trace columns, json mode and initial-state flag") {
  const fs::path out = temp_file("zsq_trace.csv");
  const CommandResult r = run_cli(
      "run --tau-bar 2.827433388230814 --g-bar 1 --dp-bar 0.4 "
      "--initial coherent:1,0 --n-steps 5 --out " +
      out.string());
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.find("n,step_prob,cum_prob,fidelity,purity") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  fs::remove(out);

  const CommandResult j = run_cli(
      "run --tau-bar 2.827433388230814 --g-bar 1 --dp-bar 0.4 "
      "--initial thermal:0.5 --n-steps 2 --format json");
  CHECK(j.exit_code == 0);
  CHECK(j.output.find("\"rows\"") != std::string::npos);

  const CommandResult bad = run_cli(
      "run --tau-bar 2.8 --g-bar 1 --dp-bar 0.4 --n-steps 0");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("run: undersized dimension surfaces a remediation hint") {
  const CommandResult r = run_cli(
      "run --tau-bar 2.827433388230814 --g-bar 1 --dp-bar 0.4 "
      "--initial coherent:3,0 --n-steps 2 --dim 12");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("--dim") != std::string::npos);
}

TEST_CASE("config file supplies defaults, flags override") {
  const fs::path cfg = temp_file("zsq_config.ini");
  {
    std::ofstream os(cfg);
    os << "tau-bar=2.827433388230814\n";
    os << "g-bar=1\n";
    os << "dp-bar=0.4\n";
  }
  const CommandResult from_cfg =
      run_cli("point --config " + cfg.string());
  CHECK(from_cfg.exit_code == 0);
  CHECK(from_cfg.output.find("status = ok") != std::string::npos);

  // A flag on the command line beats the config value: g-bar=0 forces the
  // degenerate exit.
  const CommandResult overridden =
      run_cli("point --config " + cfg.string() + " --g-bar 0");
  CHECK(overridden.exit_code == 2);
  fs::remove(cfg);
}

TEST_CASE("config path can come from the environment") {
  const fs::path cfg = temp_file("zsq_env_config.ini");
  {
    std::ofstream os(cfg);
    os << "tau-bar=1.3\n";
    os << "g-bar=0.9\n";
    os << "dp-bar=0.7\n";
  }
  const std::string tmp =
      (fs::temp_directory_path() / "zsq_env_out.txt").string();
  const std::string cmd = "ZSQ_CONFIG=" + cfg.string() + " " +
                          std::string(ZSQ_CLI_PATH) + " point > " + tmp +
                          " 2>&1";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  CHECK(code == 0);
  CHECK(slurp(tmp).find("status = ok") != std::string::npos);
  fs::remove(cfg);
}

TEST_CASE("plot-script emits deterministic gnuplot text per figure") {
  const fs::path out1 = temp_file("zsq_fig3a.gp");
  const fs::path out2 = temp_file("zsq_fig3b.gp");
  CHECK(run_cli("plot-script --figure 3 --data line.csv --out " +
                out1.string())
            .exit_code == 0);
  CHECK(run_cli("plot-script --figure 3 --data line.csv --out " +
                out2.string())
            .exit_code == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(slurp(out1).find("line.csv") != std::string::npos);
  fs::remove(out1);
  fs::remove(out2);

  const CommandResult bad =
      run_cli("plot-script --figure 7 --data x.csv");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("verify quick passes and honors the json format flag") {
  const CommandResult r = run_cli("verify --level quick --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"passed\": true") != std::string::npos);
}

TEST_SUITE_END();
