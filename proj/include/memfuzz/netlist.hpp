#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "memfuzz/crossbar.hpp"
#include "memfuzz/csv.hpp"
#include "memfuzz/version.hpp"

namespace memfuzz {

/// SPICE netlist of the crossbar as a static resistor snapshot: every cell is
/// a fixed resistor at its present memristance, rows are DC sources (v_read
/// on the active rows, 0 V elsewhere), and each column feeds an ideal
/// inverting summer (high-gain VCVS) through a feedback resistor.
/// Column c's output node is `out<c>`.
inline std::string export_netlist(const Crossbar& xbar, const ReadoutConfig& cfg,
                                  std::span<const std::size_t> active_rows = {}) {
  for (const std::size_t r : active_rows) {
    if (r >= xbar.rows()) throw DomainError("active row " + std::to_string(r) + " out of range");
  }
  auto active = [&](std::size_t r) { return std::find(active_rows.begin(), active_rows.end(), r) != active_rows.end(); };
  const auto& p = xbar.params();
  using csv::num;

  std::string out;
  out += "* memfuzz " + std::string(kVersion) + " crossbar netlist\n";
  out += "* rows=" + num(xbar.rows()) + " cols=" + num(xbar.cols()) + "\n";
  out += "* device r_on=" + num(p.r_on) + " r_off=" + num(p.r_off) + " v_th_pos=" + num(p.v_th_pos) +
         " v_th_neg=" + num(p.v_th_neg) + " k_drift=" + num(p.k_drift) + "\n";
  out += "* readout r_f=" + num(cfg.r_f) + " v_read=" + num(cfg.v_read);
  if (cfg.shunt) out += " r_c=" + num(cfg.shunt->r_c) + " v_c=" + num(cfg.shunt->v_c);
  out += "\n";
  out += ".subckt OPAMP_IDEAL inp inn out\n";
  out += "EGAIN out 0 inp inn 1e9\n";
  out += ".ends OPAMP_IDEAL\n";

  for (std::size_t r = 0; r < xbar.rows(); ++r) {
    out += "VROW" + num(r) + " row" + num(r) + " 0 DC " + num(active(r) ? cfg.v_read : 0.0) + "\n";
  }
  if (cfg.shunt) out += "VC vc 0 DC " + num(cfg.shunt->v_c) + "\n";
  for (std::size_t c = 0; c < xbar.cols(); ++c) {
    for (std::size_t r = 0; r < xbar.rows(); ++r) {
      out += "RX" + num(r) + "_" + num(c) + " row" + num(r) + " sum" + num(c) + " " + num(xbar.memristance(r, c)) + "\n";
    }
    if (cfg.shunt) out += "RC" + num(c) + " vc sum" + num(c) + " " + num(cfg.shunt->r_c) + "\n";
    out += "RF" + num(c) + " sum" + num(c) + " out" + num(c) + " " + num(cfg.r_f) + "\n";
    out += "XOP" + num(c) + " 0 sum" + num(c) + " out" + num(c) + " OPAMP_IDEAL\n";
  }
  out += ".op\n";
  out += ".end\n";
  return out;
}

}  // namespace memfuzz
