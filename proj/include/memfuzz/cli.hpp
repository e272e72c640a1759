#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "memfuzz/config.hpp"
#include "memfuzz/crossbar.hpp"
#include "memfuzz/device.hpp"
#include "memfuzz/netlist.hpp"
#include "memfuzz/pulsegen.hpp"
#include "memfuzz/shapes.hpp"
#include "memfuzz/svg.hpp"
#include "memfuzz/version.hpp"

namespace memfuzz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

/// Pulse counts of the reference 8-level column.
inline const std::vector<int> kReferenceCounts = {3, 7, 8, 12, 15, 11, 6, 4};

/// "tri:a,b,c", "trap:a,b,c,d" or "gauss:center,sigma".
inline ShapeSpec parse_shape(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw DomainError("shape '" + std::string(text) + "' lacks a kind prefix");
  const std::string_view kind = text.substr(0, colon);
  std::vector<double> v;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view tok = rest.substr(0, comma);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw DomainError("bad number '" + std::string(tok) + "' in shape");
    }
    v.push_back(value);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  auto need = [&](std::size_t n) {
    if (v.size() != n) throw DomainError(std::string(kind) + " shape needs " + std::to_string(n) + " parameters");
  };
  ShapeSpec spec;
  if (kind == "tri") {
    need(3);
    spec = Triangular{v[0], v[1], v[2]};
  } else if (kind == "trap") {
    need(4);
    spec = Trapezoidal{v[0], v[1], v[2], v[3]};
  } else if (kind == "gauss") {
    need(2);
    spec = Gaussian{v[0], v[1]};
  } else {
    throw DomainError("unknown shape kind '" + std::string(kind) + "'");
  }
  validate(spec);
  return spec;
}

namespace detail {

using Outputs = std::vector<std::pair<std::string, std::string>>;

// All files are staged next to their targets and renamed only once every
// write succeeded.
inline void commit(const Outputs& files) {
  std::vector<std::string> staged;
  try {
    for (const auto& [path, content] : files) {
      const std::string tmp = path + ".tmp";
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw Error("cannot write '" + path + "'");
      staged.push_back(tmp);
      f << content;
      f.close();
      if (!f) throw Error("cannot write '" + path + "'");
    }
    for (std::size_t k = 0; k < files.size(); ++k) std::filesystem::rename(staged[k], files[k].first);
  } catch (...) {
    std::error_code ec;
    for (const auto& tmp : staged) std::filesystem::remove(tmp, ec);
    throw;
  }
}

inline Config resolve_config(const std::string& path) { return path.empty() ? parse_config("{}") : load_config(path); }

inline void program_column(Crossbar& xbar, std::size_t col, const std::vector<int>& counts, const PulseTemplate& pulse) {
  if (counts.size() != xbar.rows()) {
    throw DomainError("got " + std::to_string(counts.size()) + " pulse counts for " + std::to_string(xbar.rows()) +
                      " rows");
  }
  for (std::size_t r = 0; r < counts.size(); ++r) xbar.program_cell(r, col, with_count(pulse, counts[r]), pulse.default_dt());
}

}  // namespace detail

/// Runs one subcommand. `args` excludes the program name. Returns 0 on
/// success, 1 on usage errors and 2 on configuration or domain errors.
/// Output files are written only when the command succeeds.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Memristive crossbar fuzzy membership-function simulator", "memfuzz"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string svg_path;
  std::size_t col = 0;
  std::optional<std::size_t> levels;

  auto common = [&](CLI::App* sub, const char* out_help) {
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--out", out_path, out_help)->required();
  };

  auto* sweep = app.add_subcommand("device-sweep", "Sine-sweep a fresh device and write its I-V trace");
  double amplitude = 1.5, freq = 1.0, dt = 0.0;
  int cycles = 2;
  common(sweep, "trace CSV (t_s,v_V,i_A,x,m_ohm)");
  sweep->add_option("--amplitude", amplitude, "sine amplitude, V")->capture_default_str();
  sweep->add_option("--freq", freq, "sine frequency, Hz")->capture_default_str();
  sweep->add_option("--cycles", cycles, "whole periods")->capture_default_str();
  sweep->add_option("--dt", dt, "time step, s (default 1/(1000 freq))");
  sweep->add_option("--svg", svg_path, "I-V plot");

  std::vector<int> counts;
  auto* program = app.add_subcommand("program", "Program one column with pulse counts and dump the crossbar state");
  common(program, "crossbar CSV (row,col,x,m_ohm)");
  program->add_option("--counts", counts, "pulse count per row (default 3,7,8,12,15,11,6,4)")->delimiter(',');
  program->add_option("--col", col, "column to program")->capture_default_str();

  std::string shape_text;
  int n_max = 64;
  auto* synth = app.add_subcommand("synthesize", "Solve pulse counts for a target shape and program one column");
  common(synth, "synthesis report CSV");
  synth->add_option("--shape", shape_text, "tri:a,b,c | trap:a,b,c,d | gauss:center,sigma")->required();
  synth->add_option("--levels", levels, "input levels (overrides crossbar.rows)");
  synth->add_option("--col", col, "column to program")->capture_default_str();
  synth->add_option("--n-max", n_max, "largest pulse count searched")->capture_default_str();
  synth->add_option("--dt", dt, "time step, s (default width/1000)");
  synth->add_option("--svg", svg_path, "target vs achieved plot");

  auto* fsweep = app.add_subcommand("fuzzify-sweep", "Program a column, then read every level at its bin center");
  common(fsweep, "membership sweep CSV");
  auto* counts_opt = fsweep->add_option("--counts", counts, "pulse count per row")->delimiter(',');
  auto* shape_opt = fsweep->add_option("--shape", shape_text, "synthesize this shape instead of --counts");
  counts_opt->excludes(shape_opt);
  fsweep->add_option("--levels", levels, "input levels (overrides crossbar.rows)");
  fsweep->add_option("--col", col, "column to read")->capture_default_str();
  fsweep->add_option("--n-max", n_max, "largest pulse count searched with --shape")->capture_default_str();
  fsweep->add_option("--svg", svg_path, "membership plot");

  std::vector<std::size_t> active = {0};
  auto* netlist = app.add_subcommand("export-netlist", "Write a SPICE netlist snapshot of the crossbar");
  common(netlist, "netlist file");
  netlist->add_option("--counts", counts, "program column --col with these counts first")->delimiter(',');
  netlist->add_option("--col", col, "column to program")->capture_default_str();
  netlist->add_option("--active", active, "rows driven at v_read")->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << app.help();
    return kExitUsage;
  }

  try {
    Config cfg = detail::resolve_config(config_path);
    if (levels) cfg.rows = *levels;
    const ReadoutConfig readout = cfg.readout();
    detail::Outputs files;

    if (sweep->parsed()) {
      const double step = dt > 0.0 ? dt : 1.0 / (1000.0 * freq);
      const auto trace = simulate(cfg.device, fresh_state(cfg.device), sine_sweep(amplitude, freq, cycles, step));
      files.emplace_back(out_path, trace_csv(trace));
      if (!svg_path.empty()) {
        svg::Series s{"i(v)", {}, {}};
        for (const auto& tp : trace) {
          s.x.push_back(tp.v);
          s.y.push_back(tp.i * 1e3);
        }
        files.emplace_back(svg_path, svg::line_plot("Device I-V sweep", "v (V)", "i (mA)", std::span(&s, 1)));
      }
    } else if (program->parsed()) {
      Crossbar xbar(cfg.rows, cfg.cols, cfg.device);
      detail::program_column(xbar, col, counts.empty() ? kReferenceCounts : counts, cfg.pulses);
      files.emplace_back(out_path, crossbar_csv(xbar));
    } else if (synth->parsed()) {
      const ShapeSpec shape = parse_shape(shape_text);
      Crossbar xbar(cfg.rows, cfg.cols, cfg.device);
      const double step = dt > 0.0 ? dt : cfg.pulses.default_dt();
      const auto report = synthesize(xbar, col, shape, cfg.domain(), cfg.pulses, n_max, readout, step);
      files.emplace_back(out_path, synthesis_csv(report));
      if (!svg_path.empty()) {
        std::vector<svg::Series> s = {{"target", {}, {}}, {"achieved", {}, {}}};
        for (const auto& l : report.levels) {
          s[0].x.push_back(static_cast<double>(l.level));
          s[0].y.push_back(l.target_mu);
          s[1].x.push_back(static_cast<double>(l.level));
          s[1].y.push_back(l.achieved_mu);
        }
        files.emplace_back(svg_path, svg::line_plot("Synthesized membership", "level", "mu", s));
      }
    } else if (fsweep->parsed()) {
      Crossbar xbar(cfg.rows, cfg.cols, cfg.device);
      if (!shape_text.empty()) {
        synthesize(xbar, col, parse_shape(shape_text), cfg.domain(), cfg.pulses, n_max, readout,
                   cfg.pulses.default_dt());
      } else {
        detail::program_column(xbar, col, counts.empty() ? kReferenceCounts : counts, cfg.pulses);
      }
      const auto rows = membership_sweep(xbar, col, cfg.domain(), readout);
      files.emplace_back(out_path, membership_sweep_csv(rows));
      if (!svg_path.empty()) {
        svg::Series s{"mu_rescaled", {}, {}};
        for (const auto& r : rows) {
          s.x.push_back(r.x_center);
          s.y.push_back(r.reading.mu_rescaled);
        }
        files.emplace_back(svg_path, svg::line_plot("Discrete membership function", "input", "mu", std::span(&s, 1)));
      }
    } else if (netlist->parsed()) {
      Crossbar xbar(cfg.rows, cfg.cols, cfg.device);
      if (!counts.empty()) detail::program_column(xbar, col, counts, cfg.pulses);
      files.emplace_back(out_path, export_netlist(xbar, readout, active));
    }

    detail::commit(files);
    return kExitOk;
  } catch (const Error& e) {
    err << "memfuzz: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "memfuzz: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace memfuzz::cli
