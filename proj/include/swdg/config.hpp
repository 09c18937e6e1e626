#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "swdg/scenarios.hpp"
#include "swdg/timeloop.hpp"

namespace swdg {

struct ConfigError : SwdgError {
  explicit ConfigError(const std::string& msg) : SwdgError(msg) {}
};

namespace config_detail {

struct Entry {
  std::string section, key, value;
  int line = 0;
};

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<Entry> tokenize(std::istream& in) {
  std::vector<Entry> entries;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    Entry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = lineno;
    entries.push_back(e);
  }
  return entries;
}

inline double to_double(const Entry& e) {
  try {
    size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("config line " + std::to_string(e.line) + ": key '" + e.section + "." +
                      e.key + "' expects a number, got '" + e.value + "'");
  }
}

inline int to_int(const Entry& e) {
  try {
    size_t pos = 0;
    const int v = std::stoi(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("config line " + std::to_string(e.line) + ": key '" + e.section + "." +
                      e.key + "' expects an integer, got '" + e.value + "'");
  }
}

inline bool to_bool(const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "on") return true;
  if (e.value == "false" || e.value == "0" || e.value == "off") return false;
  throw ConfigError("config line " + std::to_string(e.line) + ": key '" + e.section + "." +
                    e.key + "' expects a boolean, got '" + e.value + "'");
}

}  // namespace config_detail

inline void validate_config(RunConfig& c);

/// Parse the flat sectioned key=value format, overlay the named scenario's
/// defaults with the explicit keys, and reject anything unknown.
inline RunConfig parse_config_text(std::istream& in) {
  using config_detail::Entry;
  const std::vector<Entry> entries = config_detail::tokenize(in);

  std::string scenario;
  for (const Entry& e : entries)
    if (e.section == "run" && e.key == "scenario") scenario = e.value;
  if (scenario.empty()) throw ConfigError("config: missing required key run.scenario");

  RunConfig c = make_scenario(scenario).config;
  bool sigma_overridden = false;
  int degree_before = c.degree;

  for (const Entry& e : entries) {
    const std::string id = e.section + "." + e.key;
    if (id == "run.scenario") continue;
    else if (id == "run.T") c.final_time = config_detail::to_double(e);
    else if (id == "run.cfl") c.cfl = config_detail::to_double(e);
    else if (id == "run.N") c.degree = config_detail::to_int(e);
    else if (id == "run.mode") {
      if (e.value == "es") c.mode = SchemeMode::es;
      else if (e.value == "standard") c.mode = SchemeMode::standard;
      else
        throw ConfigError("config line " + std::to_string(e.line) +
                          ": run.mode must be 'es' or 'standard'");
    }
    else if (id == "mesh.generator") {
      if (e.value == "cartesian") c.mesh_kind = MeshKind::cartesian;
      else if (e.value == "curved_dam") c.mesh_kind = MeshKind::curved_dam;
      else if (e.value == "wavy") c.mesh_kind = MeshKind::wavy;
      else
        throw ConfigError("config line " + std::to_string(e.line) + ": unknown mesh.generator '" +
                          e.value + "'");
    }
    else if (id == "mesh.kx") c.kx = config_detail::to_int(e);
    else if (id == "mesh.ky") c.ky = config_detail::to_int(e);
    else if (id == "mesh.x0") c.x0 = config_detail::to_double(e);
    else if (id == "mesh.x1") c.x1 = config_detail::to_double(e);
    else if (id == "mesh.y0") c.y0 = config_detail::to_double(e);
    else if (id == "mesh.y1") c.y1 = config_detail::to_double(e);
    else if (id == "mesh.periodic_x") c.periodic_x = config_detail::to_bool(e);
    else if (id == "mesh.periodic_y") c.periodic_y = config_detail::to_bool(e);
    else if (id == "mesh.dam_fraction") c.dam_fraction = config_detail::to_double(e);
    else if (id == "mesh.wavy_amp") c.wavy_amp = config_detail::to_double(e);
    else if (id == "physics.g") c.phys.g = config_detail::to_double(e);
    else if (id == "physics.h_tol") c.phys.h_tol = config_detail::to_double(e);
    else if (id == "physics.h_des") c.phys.h_des = config_detail::to_double(e);
    else if (id == "physics.h_ref") c.phys.h_ref = config_detail::to_double(e);
    else if (id == "viscosity.enabled") c.visc.enabled = config_detail::to_bool(e);
    else if (id == "viscosity.epsilon0") c.visc.epsilon0 = config_detail::to_double(e);
    else if (id == "viscosity.sigma_min") {
      c.visc.sigma_min = config_detail::to_double(e);
      sigma_overridden = true;
    }
    else if (id == "viscosity.sigma_max") {
      c.visc.sigma_max = config_detail::to_double(e);
      sigma_overridden = true;
    }
    else if (id == "limiter.enabled") c.limiter_enabled = config_detail::to_bool(e);
    else if (id == "output.dir") c.out_dir = e.value;
    else if (id == "output.snapshot_dt") c.snapshot_dt = config_detail::to_double(e);
    else if (id == "output.dump_mesh") c.dump_mesh = config_detail::to_bool(e);
    else
      throw ConfigError("config line " + std::to_string(e.line) + ": unknown key '" + id + "'");
  }

  // the sigma band tracks a degree override unless pinned explicitly
  if (c.degree != degree_before && !sigma_overridden && c.degree >= 2)
    default_sigma_band(c.degree, c.visc.sigma_min, c.visc.sigma_max);

  validate_config(c);
  return c;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config_text(in);
}

inline void validate_config(RunConfig& c) {
  if (!(c.final_time > 0.0)) throw ConfigError("config: run.T must be > 0");
  if (!(c.cfl > 0.0) || c.cfl > 1.0) throw ConfigError("config: run.cfl must be in (0, 1]");
  if (c.degree < 1) throw ConfigError("config: run.N must be >= 1");
  if (c.kx < 1 || c.ky < 1) throw ConfigError("config: mesh.kx/ky must be >= 1");
  if (!(c.phys.g > 0.0)) throw ConfigError("config: physics.g must be > 0");
  if (!(c.phys.h_des > 0.0) || c.phys.h_des > c.phys.h_tol)
    throw ConfigError("config: need 0 < physics.h_des <= physics.h_tol");
  if (c.visc.enabled && c.degree < 2)
    throw ConfigError("config: artificial viscosity requires run.N >= 2");
  if (c.visc.enabled && !(c.visc.sigma_min < c.visc.sigma_max))
    throw ConfigError("config: viscosity.sigma_min must be < viscosity.sigma_max");
}

/// Canonical one-line-per-key dump of the resolved configuration; the FNV-1a
/// hash of this text tags every output file.
inline std::string config_to_text(const RunConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "[run]\nscenario=" << c.scenario << "\nT=" << c.final_time << "\ncfl=" << c.cfl
     << "\nN=" << c.degree << "\nmode=" << (c.mode == SchemeMode::es ? "es" : "standard")
     << "\n[mesh]\ngenerator="
     << (c.mesh_kind == MeshKind::cartesian ? "cartesian"
                                            : c.mesh_kind == MeshKind::curved_dam ? "curved_dam"
                                                                                  : "wavy")
     << "\nkx=" << c.kx << "\nky=" << c.ky << "\nx0=" << c.x0 << "\nx1=" << c.x1
     << "\ny0=" << c.y0 << "\ny1=" << c.y1 << "\nperiodic_x=" << c.periodic_x
     << "\nperiodic_y=" << c.periodic_y << "\ndam_fraction=" << c.dam_fraction
     << "\nwavy_amp=" << c.wavy_amp << "\n[physics]\ng=" << c.phys.g
     << "\nh_tol=" << c.phys.h_tol << "\nh_des=" << c.phys.h_des << "\nh_ref=" << c.phys.h_ref
     << "\n[viscosity]\nenabled=" << c.visc.enabled << "\nepsilon0=" << c.visc.epsilon0
     << "\nsigma_min=" << c.visc.sigma_min << "\nsigma_max=" << c.visc.sigma_max
     << "\n[limiter]\nenabled=" << c.limiter_enabled << "\n[output]\ndir=" << c.out_dir
     << "\nsnapshot_dt=" << c.snapshot_dt << "\ndump_mesh=" << c.dump_mesh << "\n";
  return os.str();
}

inline std::string config_hash(const RunConfig& c) {
  const std::string text = config_to_text(c);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace swdg
