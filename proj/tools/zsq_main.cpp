// zsq: analytic evaluation, protocol simulation and cross-verification of
// the repeated-measurement squeezed-state distillation of a bosonic mode.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 no distillation at the
// requested point, 3 verification failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zsq/analytic.hpp"
#include "zsq/oracle.hpp"
#include "zsq/protocol.hpp"
#include "zsq/sweep.hpp"
#include "zsq/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoDistillation = 2;
constexpr int kExitVerifyFailed = 3;

std::string complex_str(zsq::Complex z) {
  std::string s = zsq::format_double(z.real());
  s += (z.imag() < 0.0 ? " - " : " + ");
  s += zsq::format_double(std::abs(z.imag()));
  s += "i";
  return s;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  os << content;
  if (!os) {
    throw std::runtime_error("failed writing output file: " + path);
  }
}

struct GridFlag {
  std::vector<std::string> raw;
};

zsq::AxisSpec parse_axis(const std::string& text) {
  // MIN:MAX:COUNT
  const auto c1 = text.find(':');
  const auto c2 = (c1 == std::string::npos) ? c1 : text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw std::invalid_argument("grid axis must be AXIS=MIN:MAX:COUNT");
  }
  zsq::AxisSpec axis;
  axis.min = std::stod(text.substr(0, c1));
  axis.max = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  axis.count = std::stoi(text.substr(c2 + 1));
  return axis;
}

void apply_grid_flags(const std::vector<std::string>& raw,
                      zsq::SweepGrid& grid) {
  for (const std::string& item : raw) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("grid flag must be AXIS=MIN:MAX:COUNT");
    }
    const std::string axis_name = item.substr(0, eq);
    const zsq::AxisSpec axis = parse_axis(item.substr(eq + 1));
    if (axis_name == "tau-bar" || axis_name == "tau_bar") {
      grid.tau_axis = axis;
    } else if (axis_name == "g-bar" || axis_name == "g_bar") {
      grid.g_axis = axis;
    } else if (axis_name == "dp-bar" || axis_name == "dp_bar") {
      grid.dp_axis = axis;
    } else {
      throw std::invalid_argument("unknown grid axis: " + axis_name);
    }
  }
}

int cmd_point(const zsq::ProtocolParams& params) {
  std::ostringstream os;
  os << "tau_bar = " << zsq::format_double(params.tau_bar) << "\n";
  os << "g_bar = " << zsq::format_double(params.g_bar) << "\n";
  os << "dp_bar = " << zsq::format_double(params.dp_bar) << "\n";

  const zsq::OperatorScalars sc = zsq::compute_scalars(params);
  os << "M = " << complex_str(sc.M) << "\n";
  os << "G = " << complex_str(sc.G) << "\n";

  try {
    const zsq::BranchSolution br = zsq::resolve_branch(params);
    const zsq::Spectrum sp = zsq::spectrum(params, 5);
    const zsq::SqueezedTarget target = zsq::target_state(br);
    os << "status = ok\n";
    os << "q = " << complex_str(br.q) << "\n";
    os << "Lambda = " << complex_str(br.lambda) << "\n";
    os << "zeta = " << complex_str(br.zeta) << "\n";
    for (size_t n = 0; n < sp.gamma.size(); ++n) {
      os << "gamma_" << n << " = " << complex_str(sp.gamma[n]) << "\n";
    }
    os << "rate = " << zsq::format_double(-std::log(std::abs(br.lambda)))
       << "\n";
    os << "r = " << zsq::format_double(target.r) << "\n";
    os << "phi = " << zsq::format_double(target.phi) << "\n";
    os << "tanh_r = " << zsq::format_double(std::tanh(target.r)) << "\n";
    os << "mean_quanta = " << zsq::format_double(target.mean_quanta) << "\n";
    os << "quanta_variance = " << zsq::format_double(target.quanta_variance)
       << "\n";
    std::cout << os.str();
    return kExitOk;
  } catch (const zsq::NoDistillation& e) {
    os << "status = no_distillation\n";
    os << "reason = " << e.what() << "\n";
    std::cout << os.str();
    return kExitNoDistillation;
  }
}

int cmd_sweep(const zsq::SweepGrid& grid, const std::string& quantity,
              const std::string& format, const std::string& out) {
  const zsq::SweepQuantity q = zsq::parse_quantity(quantity);
  const std::vector<zsq::SweepRow> rows = zsq::run_sweep(grid, q);
  write_output(out,
               format == "json" ? zsq::sweep_to_json(rows)
                                : zsq::sweep_to_csv(rows));
  return kExitOk;
}

int cmd_run(const zsq::ProtocolParams& params, const std::string& initial,
            int n_steps, std::optional<int> dim_override,
            const std::string& format, const std::string& out) {
  if (n_steps < 1) {
    throw std::invalid_argument("run: --n-steps must be >= 1");
  }
  const zsq::InitialStateSpec spec = zsq::parse_initial_state(initial);

  int dim = 0;
  if (dim_override) {
    dim = *dim_override;
    if (dim < 2) throw std::invalid_argument("run: --dim must be >= 2");
  } else {
    try {
      dim = zsq::choose_dim(zsq::target_state(params), 1e-10);
    } catch (const zsq::NoDistillation&) {
      dim = 60;  // degenerate point: no target to size against
    }
  }

  try {
    const zsq::DensityMatrix rho0 = zsq::make_initial_state(spec, dim);
    const zsq::SimulationTrace trace = zsq::run(params, rho0, n_steps, dim);
    write_output(out, format == "json" ? zsq::trace_to_json(trace)
                                       : zsq::trace_to_csv(trace));
    return kExitOk;
  } catch (const zsq::TailTooLarge& e) {
    throw std::runtime_error(std::string(e.what()) +
                             " (hint: pass a larger --dim)");
  }
}

int cmd_verify(const std::string& level, const std::string& format,
               const std::string& out) {
  zsq::VerifyLevel lvl;
  if (level == "quick") {
    lvl = zsq::VerifyLevel::quick;
  } else if (level == "full") {
    lvl = zsq::VerifyLevel::full;
  } else {
    throw std::invalid_argument("verify: --level must be quick or full");
  }
  const zsq::VerificationReport report = zsq::run_verification(lvl);
  if (!out.empty()) {
    write_output(out, zsq::report_to_json(report));
    std::cout << zsq::report_to_text(report);
  } else if (format == "json") {
    std::cout << zsq::report_to_json(report);
  } else {
    std::cout << zsq::report_to_text(report);
  }
  return report.passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Squeezed-state distillation of a bosonic mode by repeated "
      "measurements: closed-form evaluation, truncated Fock simulation and "
      "cross-verification"};
  app.fallthrough();
  app.set_config("--config", "", "flat key=value configuration file")
      ->envname("ZSQ_CONFIG");

  double tau_bar = 0.0, g_bar = 0.0, dp_bar = 0.0;
  app.add_option("--tau-bar", tau_bar,
                 "dimensionless measurement period omega*tau");
  app.add_option("--g-bar", g_bar, "dimensionless coupling");
  app.add_option("--dp-bar", dp_bar, "dimensionless momentum spread");

  int dim = 0;
  app.add_option("--dim", dim, "Fock-space truncation dimension");
  int n_steps = 0;
  app.add_option("--n-steps", n_steps, "number of measurements");
  std::string initial = "vacuum";
  app.add_option("--initial", initial,
                 "initial field state: vacuum | coherent:RE,IM | "
                 "thermal:NBAR");
  std::string format = "csv";
  app.add_option("--format", format, "output format: csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  std::string out;
  app.add_option("--out", out, "output path ('-' or empty for stdout)");
  std::string quantity = "both";
  app.add_option("--quantity", quantity,
                 "sweep quantity: rate | tanh_r | both");
  std::vector<std::string> grid_flags;
  app.add_option("--grid", grid_flags,
                 "sweep axis AXIS=MIN:MAX:COUNT, repeatable "
                 "(axes: tau-bar, g-bar, dp-bar)");

  CLI::App* point =
      app.add_subcommand("point", "closed-form report at one parameter point");
  CLI::App* sweep =
      app.add_subcommand("sweep", "evaluate rate / tanh_r over a grid");
  CLI::App* run = app.add_subcommand("run", "simulate the protocol");
  CLI::App* verify =
      app.add_subcommand("verify", "run the cross-validation battery");
  CLI::App* plot = app.add_subcommand(
      "plot-script", "emit a gnuplot script for a standard figure");

  std::string verify_level = "quick";
  verify->add_option("--level", verify_level, "quick | full")
      ->check(CLI::IsMember({"quick", "full"}));

  int figure = 0;
  std::string data_path;
  plot->add_option("--figure", figure, "figure id: 1 | 2 | 3 | 4")
      ->required();
  plot->add_option("--data", data_path, "data file the script reads")
      ->required();

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (point->parsed()) {
      return cmd_point({tau_bar, g_bar, dp_bar});
    }
    if (sweep->parsed()) {
      zsq::SweepGrid grid;
      grid.tau_fixed = tau_bar;
      grid.g_fixed = g_bar;
      grid.dp_fixed = dp_bar;
      apply_grid_flags(grid_flags, grid);
      if (!grid.tau_axis && !grid.g_axis && !grid.dp_axis) {
        throw std::invalid_argument("sweep: need at least one --grid axis");
      }
      return cmd_sweep(grid, quantity, format, out);
    }
    if (run->parsed()) {
      return cmd_run({tau_bar, g_bar, dp_bar}, initial, n_steps,
                     dim > 0 ? std::optional<int>(dim) : std::nullopt, format,
                     out);
    }
    if (verify->parsed()) {
      return cmd_verify(verify_level, format, out);
    }
    if (plot->parsed()) {
      write_output(out, zsq::plot_script(figure, data_path));
      return kExitOk;
    }
  } catch (const zsq::UnknownFigure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
