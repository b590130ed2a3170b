#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "aniso/experiments.hpp"

namespace aniso {

struct Verdict {
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
};
using VerdictMap = std::map<std::string, Verdict>;

// columns: t, then E_i,K_i,W_i,N_high_i,N_low_i per component, then cone bins per component
std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows);
void write_text(const std::string& path, const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<double> column(const std::string& name) const;
};
CsvTable read_csv(const std::string& path);

nlohmann::json verdict_json(const VerdictMap& v);
std::string loglog_svg(const std::string& title, const std::vector<double>& t,
                       const std::vector<double>& v);

// Verdicts for a finished run: bootstrap functional, scattering drift, warnings.
VerdictMap run_verdicts(const RunResult& r);

// diagnostics.csv, verdict.json, manifest.json and one SVG per series into dir
void emit_report(const std::string& dir, const RunResult& r, const VerdictMap& v);

}  // namespace aniso
