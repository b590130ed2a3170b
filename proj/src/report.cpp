#include "aniso/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aniso {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

}  // namespace

std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows) {
  std::ostringstream out;
  if (rows.empty()) return "t\n";
  const std::size_t m = rows[0].E.size();
  out << "t";
  for (std::size_t i = 0; i < m; ++i)
    out << ",E_" << i << ",K_" << i << ",W_" << i << ",N_high_" << i << ",N_low_" << i;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t b = 0; b < rows[0].cone[i].size(); ++b) out << ",cone_" << i << "_" << b;
  out << "\n";
  for (const auto& r : rows) {
    out << num(r.t);
    for (std::size_t i = 0; i < m; ++i)
      out << "," << num(r.E[i]) << "," << num(r.K[i]) << "," << num(r.W[i]) << ","
          << num(r.N_high[i]) << "," << num(r.N_low[i]);
    for (std::size_t i = 0; i < m; ++i)
      for (double c : r.cone[i]) out << "," << num(c);
    out << "\n";
  }
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<double> CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name) {
      std::vector<double> out;
      for (const auto& r : rows) out.push_back(r.at(c));
      return out;
    }
  throw std::invalid_argument("no column named " + name);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv " + path);
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    t.rows.push_back(std::move(row));
  }
  return t;
}

json verdict_json(const VerdictMap& v) {
  json j = json::object();
  for (const auto& [name, x] : v) j[name] = {{"pass", x.pass}, {"value", x.value}, {"bound", x.bound}};
  return j;
}

std::string loglog_svg(const std::string& title, const std::vector<double>& t,
                       const std::vector<double>& v) {
  const double W = 480, H = 320, pad = 40;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(v[i] > 0.0)) continue;
    x0 = std::min(x0, std::log10(t[i]));
    x1 = std::max(x1, std::log10(t[i]));
    y0 = std::min(y0, std::log10(v[i]));
    y1 = std::max(y1, std::log10(v[i]));
  }
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << pad << "\" y=\"20\" font-size=\"13\">" << title << " (log-log)</text>\n";
  s << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\""
    << H - 2 * pad << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (x1 > x0 && y1 >= y0) {
    if (y1 == y0) y1 = y0 + 1.0;
    s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!(t[i] > 0.0) || !(v[i] > 0.0)) continue;
      double px = pad + (std::log10(t[i]) - x0) / (x1 - x0) * (W - 2 * pad);
      double py = H - pad - (std::log10(v[i]) - y0) / (y1 - y0) * (H - 2 * pad);
      s << px << "," << py << " ";
    }
    s << "\"/>\n";
    s << "<text x=\"" << pad << "\" y=\"" << H - 10 << "\" font-size=\"11\">t: 1e" << x0 << " .. 1e" << x1
      << ", value: 1e" << y0 << " .. 1e" << y1 << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

VerdictMap run_verdicts(const RunResult& r) {
  VerdictMap v;
  v["smallness_regime"] = {!r.warning, r.warning ? 1.0 : 0.0, 0.0};
  if (!r.cfg.bootstrap_mode.empty()) {
    BootstrapMode mode = parse_mode(r.cfg.bootstrap_mode);
    BootstrapReport b = bootstrap_monitor(r.rows, r.cfg.epsilon0, r.cfg.diag.delta, mode, r.cfg.system);
    v["bootstrap_" + to_string(mode)] = {b.pass, b.sup_value, b.bound};
  }
  auto has = [&](double t) { return r.traj.profiles.count(t) > 0; };
  if (has(2.0) && has(4.0) && has(8.0) && has(16.0))
    for (int i = 0; i < r.cfg.system.m; ++i) {
      double early = scattering_drift(r.traj, i, 2.0, 4.0);
      double late = scattering_drift(r.traj, i, 8.0, 16.0);
      v["scattering_drift_" + std::to_string(i)] = {late < early, late, early};
    }
  return v;
}

void emit_report(const std::string& dir, const RunResult& r, const VerdictMap& v) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
  write_text(dir + "/diagnostics.csv", diagnostics_csv(r.rows));
  write_text(dir + "/verdict.json", verdict_json(v).dump(2) + "\n");

  json manifest;
  manifest["name"] = r.cfg.name;
  manifest["config"] = r.cfg.source;
  manifest["config_hash"] = config_hash(r.cfg.source);
  manifest["seed"] = r.cfg.seed;
  manifest["data_scale"] = r.data_scale;
  manifest["separation"] = r.separation;
  manifest["W_normalization"] = "max |coefficient| * h^3 (continuum transform with e^{-i x.xi})";
  try {
    Constants c = load_constants(default_constants_path());
    manifest["constants"] = c.values;
    manifest["constants_version"] = c.version;
  } catch (const std::exception&) {
    manifest["constants"] = nullptr;
  }
  write_text(dir + "/manifest.json", manifest.dump(2) + "\n");

  std::vector<double> t;
  for (const auto& row : r.rows) t.push_back(row.t);
  for (int i = 0; i < r.cfg.system.m; ++i) {
    auto series = [&](const char* name, auto get) {
      std::vector<double> v;
      for (const auto& row : r.rows) v.push_back(get(row));
      std::string label = std::string(name) + "_" + std::to_string(i);
      write_text(dir + "/" + label + ".svg", loglog_svg(label, t, v));
    };
    series("E", [&](const DiagnosticsRow& row) { return row.E[i]; });
    series("K", [&](const DiagnosticsRow& row) { return row.K[i]; });
    series("W", [&](const DiagnosticsRow& row) { return row.W[i]; });
    series("N_high", [&](const DiagnosticsRow& row) { return row.N_high[i]; });
    series("N_low", [&](const DiagnosticsRow& row) { return row.N_low[i]; });
  }
}

}  // namespace aniso
