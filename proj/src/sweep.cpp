#include "zsq/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace zsq {

namespace {

std::vector<double> axis_values(const std::optional<AxisSpec>& axis,
                                double fixed) {
  if (!axis) return {fixed};
  std::vector<double> v(axis->count);
  const double step = (axis->max - axis->min) / (axis->count - 1);
  for (int i = 0; i < axis->count; ++i) {
    v[i] = axis->min + i * step;
  }
  return v;
}

void validate_axis(const std::optional<AxisSpec>& axis, const char* name) {
  if (!axis) return;
  if (axis->count < 2) {
    throw std::invalid_argument(std::string(name) +
                                ": swept axis needs count >= 2");
  }
  if (!(axis->min < axis->max)) {
    throw std::invalid_argument(std::string(name) + ": need min < max");
  }
}

}  // namespace

void SweepGrid::validate() const {
  validate_axis(tau_axis, "tau_bar");
  validate_axis(g_axis, "g_bar");
  validate_axis(dp_axis, "dp_bar");
  if (!tau_axis && tau_fixed <= 0.0) {
    throw std::invalid_argument("tau_bar: fixed value must be positive");
  }
  if (!dp_axis && dp_fixed <= 0.0) {
    throw std::invalid_argument("dp_bar: fixed value must be positive");
  }
}

std::vector<ProtocolParams> SweepGrid::points() const {
  validate();
  std::vector<ProtocolParams> pts;
  const auto taus = axis_values(tau_axis, tau_fixed);
  const auto gs = axis_values(g_axis, g_fixed);
  const auto dps = axis_values(dp_axis, dp_fixed);
  pts.reserve(taus.size() * gs.size() * dps.size());
  for (double t : taus) {
    for (double g : gs) {
      for (double dp : dps) {
        pts.push_back({t, g, dp});
      }
    }
  }
  return pts;
}

SweepQuantity parse_quantity(const std::string& s) {
  if (s == "rate") return SweepQuantity::rate;
  if (s == "tanh_r") return SweepQuantity::tanh_r;
  if (s == "both") return SweepQuantity::both;
  throw std::invalid_argument("quantity must be rate, tanh_r or both");
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, SweepQuantity quantity,
                                int workers) {
  const std::vector<ProtocolParams> pts = grid.points();
  std::vector<SweepRow> rows(pts.size());

  const bool want_rate =
      quantity == SweepQuantity::rate || quantity == SweepQuantity::both;
  const bool want_tanh =
      quantity == SweepQuantity::tanh_r || quantity == SweepQuantity::both;

  const auto evaluate = [&](size_t i) {
    SweepRow& row = rows[i];
    row.params = pts[i];
    try {
      const BranchSolution br = resolve_branch(pts[i]);
      if (want_rate) row.rate = -std::log(std::abs(br.lambda));
      if (want_tanh) row.tanh_r = std::abs(br.zeta);
      row.status = "ok";
    } catch (const NoDistillation&) {
      row.status = "degenerate";
    }
  };

  int pool = workers > 0
                 ? workers
                 : std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
  pool = std::min<size_t>(pool, pts.size());
  if (pool <= 1) {
    for (size_t i = 0; i < pts.size(); ++i) evaluate(i);
  } else {
    std::atomic<size_t> cursor{0};
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (int t = 0; t < pool; ++t) {
      threads.emplace_back([&] {
        for (size_t i = cursor.fetch_add(1); i < pts.size();
             i = cursor.fetch_add(1)) {
          evaluate(i);
        }
      });
    }
    for (std::thread& t : threads) t.join();
  }
  return rows;
}

std::string format_double(double v) {
  char buf[40];
  // 17 significant digits round-trip any double; std::to_chars is
  // locale-independent.
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific,
                    16);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

namespace {

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

}  // namespace

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "tau_bar,g_bar,dp_bar,rate,tanh_r,status\n";
  for (const SweepRow& r : rows) {
    out += format_double(r.params.tau_bar);
    out += ',';
    out += format_double(r.params.g_bar);
    out += ',';
    out += format_double(r.params.dp_bar);
    out += ',';
    out += opt_field(r.rate);
    out += ',';
    out += opt_field(r.tanh_r);
    out += ',';
    out += r.status;
    out += '\n';
  }
  return out;
}

std::string sweep_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    nlohmann::json jr;
    jr["tau_bar"] = r.params.tau_bar;
    jr["g_bar"] = r.params.g_bar;
    jr["dp_bar"] = r.params.dp_bar;
    jr["rate"] = r.rate ? nlohmann::json(*r.rate) : nlohmann::json();
    jr["tanh_r"] = r.tanh_r ? nlohmann::json(*r.tanh_r) : nlohmann::json();
    jr["status"] = r.status;
    j.push_back(jr);
  }
  return j.dump(2) + "\n";
}

std::string trace_to_csv(const SimulationTrace& trace) {
  std::string out = "n,step_prob,cum_prob,fidelity,purity\n";
  for (const TraceRow& r : trace.rows) {
    out += std::to_string(r.n);
    out += ',';
    out += format_double(r.step_prob);
    out += ',';
    out += format_double(r.cum_prob);
    out += ',';
    out += opt_field(r.fidelity);
    out += ',';
    out += format_double(r.purity);
    out += '\n';
  }
  return out;
}

std::string trace_to_json(const SimulationTrace& trace) {
  nlohmann::json j;
  j["dim"] = trace.dim;
  if (trace.target) {
    j["target"] = {{"r", trace.target->r},
                   {"phi", trace.target->phi},
                   {"mean_quanta", trace.target->mean_quanta},
                   {"quanta_variance", trace.target->quanta_variance}};
  } else {
    j["target"] = nullptr;
  }
  j["rows"] = nlohmann::json::array();
  for (const TraceRow& r : trace.rows) {
    nlohmann::json jr;
    jr["n"] = r.n;
    jr["step_prob"] = r.step_prob;
    jr["cum_prob"] = r.cum_prob;
    jr["fidelity"] = r.fidelity ? nlohmann::json(*r.fidelity)
                                : nlohmann::json();
    jr["purity"] = r.purity;
    j["rows"].push_back(jr);
  }
  return j.dump(2) + "\n";
}

std::string plot_script(int figure, const std::string& data_path) {
  std::ostringstream os;
  os << "# gnuplot script, generated by zsq plot-script\n";
  os << "set datafile separator ','\n";
  switch (figure) {
    case 1:
    case 2: {
      const char* column = (figure == 1) ? "4" : "5";
      const char* title = (figure == 1)
                              ? "distillation rate -ln|gamma_1/gamma_0|"
                              : "tanh r of the distilled state";
      os << "set title '" << title << "'\n";
      os << "set xlabel 'tau\\_bar'\n";
      os << "set ylabel 'g\\_bar'\n";
      os << "plot '" << data_path << "' every ::1 using 1:2:" << column
         << " with image notitle\n";
      break;
    }
    case 3: {
      os << "set title 'distillation rate and tanh r vs tau\\_bar'\n";
      os << "set xlabel 'tau\\_bar'\n";
      os << "set key left top\n";
      os << "plot '" << data_path
         << "' every ::1 using 1:4 with lines dashtype 4 title "
            "'-ln|gamma_1/gamma_0|', \\\n";
      os << "     '" << data_path
         << "' every ::1 using 1:5 with lines title 'tanh r'\n";
      break;
    }
    case 4: {
      os << "set title 'survival probability and fidelity vs N'\n";
      os << "set xlabel 'N'\n";
      os << "set yrange [0:1.05]\n";
      os << "set key right center\n";
      os << "plot '" << data_path
         << "' every ::1 using 1:3 with points pointtype 6 title 'P(N)', \\\n";
      os << "     '" << data_path
         << "' every ::1 using 1:4 with points pointtype 12 title 'F(N)'\n";
      break;
    }
    default:
      throw UnknownFigure("plot_script: figure must be 1, 2, 3 or 4");
  }
  return os.str();
}

InitialStateSpec parse_initial_state(const std::string& text) {
  InitialStateSpec spec;
  if (text == "vacuum") {
    spec.kind = InitialStateSpec::Kind::vacuum;
    return spec;
  }
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (head == "coherent") {
    if (colon == std::string::npos) {
      throw std::invalid_argument("coherent state needs RE,IM amplitude");
    }
    const std::string rest = text.substr(colon + 1);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("coherent state needs RE,IM amplitude");
    }
    spec.kind = InitialStateSpec::Kind::coherent;
    spec.alpha = Complex{std::stod(rest.substr(0, comma)),
                         std::stod(rest.substr(comma + 1))};
    return spec;
  }
  if (head == "thermal") {
    if (colon == std::string::npos) {
      throw std::invalid_argument("thermal state needs NBAR");
    }
    spec.kind = InitialStateSpec::Kind::thermal;
    spec.nbar = std::stod(text.substr(colon + 1));
    if (spec.nbar < 0.0) {
      throw std::invalid_argument("thermal nbar must be >= 0");
    }
    return spec;
  }
  throw std::invalid_argument(
      "initial state must be vacuum, coherent:RE,IM or thermal:NBAR");
}

DensityMatrix make_initial_state(const InitialStateSpec& spec, int dim) {
  switch (spec.kind) {
    case InitialStateSpec::Kind::vacuum:
      return projector(coherent_state(Complex{0.0, 0.0}, dim));
    case InitialStateSpec::Kind::coherent:
      return projector(coherent_state(spec.alpha, dim));
    case InitialStateSpec::Kind::thermal:
      return thermal_state(spec.nbar, dim);
  }
  throw std::logic_error("unreachable");
}

}  // namespace zsq
