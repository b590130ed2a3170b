#include "aniso/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace aniso {

using nlohmann::json;

namespace {

Vec3 vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("config: expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig c;
  c.source = j;
  c.name = j.value("name", c.name);
  c.seed = j.value("seed", c.seed);
  if (j.contains("grid")) {
    c.n = j["grid"].value("n", c.n);
    c.box = j["grid"].value("L", c.box);
  }
  const json& sys = j.at("system");
  c.system.m = sys.at("m").get<int>();
  double cone_exp = sys.value("cone_exponent", -2.0);
  for (const auto& e : sys.at("eps")) {
    SpeedTriple sp;
    sp.eps = vec3(e);
    sp.cone_exponent = cone_exp;
    c.system.speeds.push_back(sp);
  }
  c.system.separation_required = sys.value("separation_required", false);
  c.system.no_self_interaction = sys.value("no_self_interaction", false);
  c.system.separation_margin = sys.value("separation_margin", 0.1);
  c.system.terms.assign(c.system.m, {});
  if (sys.contains("nonlinearity"))
    for (const auto& t : sys["nonlinearity"]) {
      int comp = t.at("comp").get<int>();
      if (comp < 0 || comp >= c.system.m) throw std::invalid_argument("config: term comp out of range");
      Term term;
      term.coef = t.at("coef").get<double>();
      const auto& fs = t.at("factors");
      if (fs.size() != 3) throw std::invalid_argument("config: a term needs three factors");
      for (int k = 0; k < 3; ++k) term.f[k] = {fs[k][0].get<int>(), fs[k][1].get<int>()};
      c.system.terms[comp].push_back(term);
    }
  c.epsilon0 = sys.value("epsilon0", 0.0);

  for (const auto& d : j.at("data")) {
    DataSpec ds;
    ds.kind = d.value("kind", ds.kind);
    if (d.contains("center")) ds.center = vec3(d["center"]);
    ds.radius = d.value("radius", ds.radius);
    ds.power = d.value("power", ds.power);
    ds.amplitude = d.value("amplitude", ds.amplitude);
    ds.velocity = d.value("velocity", ds.velocity);
    ds.jitter = d.value("jitter", ds.jitter);
    if (ds.kind != "bump" && ds.kind != "gaussian")
      throw std::invalid_argument("config: unknown data kind " + ds.kind);
    c.data.push_back(ds);
  }
  if (static_cast<int>(c.data.size()) != c.system.m)
    throw std::invalid_argument("config: one data entry per component");

  if (j.contains("run")) {
    const json& r = j["run"];
    c.t0 = r.value("t0", c.t0);
    c.t_end = r.value("t_end", c.t_end);
    c.dt = r.value("dt", c.dt);
    c.output_every = r.value("output_every", c.output_every);
    if (r.contains("profile_times")) c.profile_times = r["profile_times"].get<std::vector<double>>();
  }
  if (j.contains("diagnostics")) {
    const json& d = j["diagnostics"];
    c.diag.k_max = d.value("k_max", c.diag.k_max);
    c.diag.k_mid = d.value("k_mid", c.diag.k_mid);
    c.diag.delta = d.value("delta", c.diag.delta);
    c.diag.nonlinear_norms = d.value("nonlinear_norms", c.diag.nonlinear_norms);
    if (d.contains("cone_bins")) c.diag.cone_edges = d["cone_bins"].get<std::vector<double>>();
  }
  c.bootstrap_mode = j.value("bootstrap", std::string());
  c.system.validate();
  if (!(c.dt > 0.0 && c.dt <= 0.1)) throw std::invalid_argument("config: dt must lie in (0, 0.1]");
  if (!(c.t_end > c.t0)) throw std::invalid_argument("config: t_end must exceed t0");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j = json::parse(in);
  RunConfig c = parse_config(j);
  apply_env_overrides(c);
  return c;
}

void apply_env_overrides(RunConfig& cfg) {
  if (const char* s = std::getenv("ANISO_SEED")) {
    cfg.seed = std::strtoull(s, nullptr, 10);
    cfg.source["seed"] = cfg.seed;
  }
}

std::string config_hash(const json& j) {
  std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace aniso
