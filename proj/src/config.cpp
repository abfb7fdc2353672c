#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>

#include "cgks/harness.hpp"

namespace cgks::harness {

namespace {

double to_double(const std::string& key, const std::string& v) {
  size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(x)) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  size_t used = 0;
  int x = 0;
  try {
    x = std::stoi(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw ConfigError(key + ": expected on/off, got '" + v + "'");
}

std::string one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return v;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw ConfigError(key + ": '" + v + "' is not one of " + list);
}

using Setter = void (*)(CaseConfig&, const std::string&, const std::string&);

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"case.name", [](CaseConfig& c, const std::string& k, const std::string& v) {
         c.name = one_of(k, v, {"sinwave", "shu_osher", "sod"});
       }},
      {"mesh.generator", [](CaseConfig& c, const std::string& k, const std::string& v) {
         c.generator = one_of(k, v, {"hex", "hybrid", "file"});
       }},
      {"mesh.n", [](CaseConfig& c, const std::string& k, const std::string& v) { c.n = to_int(k, v); }},
      {"mesh.nx", [](CaseConfig& c, const std::string& k, const std::string& v) { c.nx = to_int(k, v); }},
      {"mesh.cross", [](CaseConfig& c, const std::string& k, const std::string& v) { c.cross = to_int(k, v); }},
      {"mesh.file", [](CaseConfig& c, const std::string&, const std::string& v) { c.mesh_file = v; }},
      {"gas.gamma", [](CaseConfig& c, const std::string& k, const std::string& v) { c.gamma = to_double(k, v); }},
      {"gas.mu", [](CaseConfig& c, const std::string& k, const std::string& v) { c.mu = to_double(k, v); }},
      {"gas.viscous", [](CaseConfig& c, const std::string& k, const std::string& v) { c.viscous = to_bool(k, v); }},
      {"solver.cfl", [](CaseConfig& c, const std::string& k, const std::string& v) { c.cfl = to_double(k, v); }},
      {"solver.recon", [](CaseConfig& c, const std::string& k, const std::string& v) {
         c.recon = one_of(k, v, {"linear", "weno"}) == "weno" ? ReconMode::Weno : ReconMode::Linear;
       }},
      {"solver.flux", [](CaseConfig& c, const std::string& k, const std::string& v) {
         c.flux = one_of(k, v, {"full", "smooth"}) == "smooth" ? flux::FluxMode::Smooth : flux::FluxMode::Full;
       }},
      {"solver.cf", [](CaseConfig& c, const std::string& k, const std::string& v) { c.cf = to_bool(k, v); }},
      {"solver.threads", [](CaseConfig& c, const std::string& k, const std::string& v) { c.threads = to_int(k, v); }},
      {"solver.t_end", [](CaseConfig& c, const std::string& k, const std::string& v) { c.t_end = to_double(k, v); }},
      {"solver.dt", [](CaseConfig& c, const std::string& k, const std::string& v) { c.fixed_dt = to_double(k, v); }},
      {"output.dir", [](CaseConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
      {"output.vtk", [](CaseConfig& c, const std::string& k, const std::string& v) { c.vtk = to_bool(k, v); }},
      {"output.csv", [](CaseConfig& c, const std::string& k, const std::string& v) { c.csv = to_bool(k, v); }},
      {"output.checkpoint_every", [](CaseConfig& c, const std::string& k, const std::string& v) {
         c.checkpoint_every = to_int(k, v);
       }},
      {"output.restart", [](CaseConfig& c, const std::string&, const std::string& v) { c.restart = v; }},
  };
  return table;
}

}  // namespace

void set_option(CaseConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second(cfg, key, value);
}

CaseConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  CaseConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside of a section");
    for (const auto& [key, value] : body) set_option(cfg, section + "." + key, value.data());
  }
  return cfg;
}

CaseConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

}  // namespace cgks::harness
