#include "nanoheat/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "nanoheat/constants.hpp"

namespace nanoheat {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool valid_section_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '.';
  });
}

bool valid_key_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

double parse_double(const std::string& text, const std::string& what,
                    const std::function<void(const std::string&)>& fail) {
  const std::string t = trim(text);
  if (!t.empty()) {
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() + t.size()) return v;
  }
  fail("value for " + what + " is not a number: '" + t + "'");
  std::abort();  // unreachable; fail throws
}

}  // namespace

void RunConfig::fail(int line, const std::string& message) const {
  std::ostringstream out;
  out << name_;
  if (line > 0) out << ":" << line;
  out << ": " << message;
  throw ConfigError(out.str());
}

RunConfig RunConfig::parse_file(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream text;
  text << file.rdbuf();
  return parse_string(text.str(), path.filename().string());
}

RunConfig RunConfig::parse_string(const std::string& text, const std::string& name) {
  RunConfig cfg;
  cfg.name_ = name;
  std::istringstream stream(text);
  std::string raw;
  std::string current;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') cfg.fail(line_no, "unterminated section header: '" + line + "'");
      const std::string section = trim(line.substr(1, line.size() - 2));
      if (!valid_section_name(section)) {
        cfg.fail(line_no, "invalid section name: '" + section + "'");
      }
      if (cfg.sections_.count(section)) {
        cfg.fail(line_no, "duplicate section [" + section + "] (first at line " +
                              std::to_string(cfg.sections_[section].line) + ")");
      }
      cfg.sections_[section].line = line_no;
      current = section;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      cfg.fail(line_no, "expected 'key = value' or '[section]', got: '" + line + "'");
    }
    if (current.empty()) {
      cfg.fail(line_no, "key outside any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key_name(key)) {
      cfg.fail(line_no, "invalid key name: '" + key + "'");
    }
    Section& section = cfg.sections_[current];
    if (section.entries.count(key)) {
      cfg.fail(line_no, "duplicate key '" + key + "' in [" + current + "] (first at line " +
                            std::to_string(section.entries[key].line) + ")");
    }
    section.entries[key] = Entry{trim(line.substr(eq + 1)), line_no, false};
  }
  return cfg;
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like section.key=value, got: '" + assignment + "'");
  }
  const std::string target = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const auto dot = target.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == target.size()) {
    throw ConfigError("override target must be section.key, got: '" + target + "'");
  }
  const std::string section = target.substr(0, dot);
  const std::string key = target.substr(dot + 1);
  if (!valid_section_name(section) || !valid_key_name(key)) {
    throw ConfigError("override target must be section.key, got: '" + target + "'");
  }
  sections_[section].entries[key] = Entry{value, 0, false};
  overrides_.push_back(section + "." + key + "=" + value);
}

bool RunConfig::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.entries.count(key) > 0;
}

RunConfig::Entry* RunConfig::find(const std::string& section, const std::string& key) {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return nullptr;
  const auto entry = it->second.entries.find(key);
  if (entry == it->second.entries.end()) return nullptr;
  entry->second.used = true;
  return &entry->second;
}

RunConfig::Entry& RunConfig::require(const std::string& section, const std::string& key) {
  Entry* entry = find(section, key);
  if (!entry) {
    const int line = has_section(section) ? sections_.at(section).line : 0;
    fail(line, "missing required key '" + key + "' in [" + section + "]");
  }
  return *entry;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key) {
  return require(section, key).value;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) {
  Entry* entry = find(section, key);
  return entry ? entry->value : fallback;
}

double RunConfig::get_double(const std::string& section, const std::string& key) {
  Entry& entry = require(section, key);
  return parse_double(entry.value, section + "." + key,
                      [&](const std::string& m) { fail(entry.line, m); });
}

double RunConfig::get_double(const std::string& section, const std::string& key, double fallback) {
  Entry* entry = find(section, key);
  if (!entry) return fallback;
  return parse_double(entry->value, section + "." + key,
                      [&](const std::string& m) { fail(entry->line, m); });
}

int RunConfig::get_int(const std::string& section, const std::string& key, int fallback) {
  Entry* entry = find(section, key);
  if (!entry) return fallback;
  const std::string t = trim(entry->value);
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) {
    fail(entry->line, "value for " + section + "." + key + " is not an integer: '" + t + "'");
  }
  return int(v);
}

bool RunConfig::get_bool(const std::string& section, const std::string& key, bool fallback) {
  Entry* entry = find(section, key);
  if (!entry) return fallback;
  std::string t = trim(entry->value);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  fail(entry->line, "value for " + section + "." + key + " is not a boolean: '" + entry->value + "'");
}

std::vector<double> RunConfig::get_double_list(const std::string& section, const std::string& key) {
  Entry* entry = find(section, key);
  std::vector<double> out;
  if (!entry) return out;
  std::istringstream stream(entry->value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    out.push_back(parse_double(t, section + "." + key,
                               [&](const std::string& m) { fail(entry->line, m); }));
  }
  return out;
}

std::vector<std::string> RunConfig::material_section_names() const {
  std::vector<std::string> names;
  for (const auto& [section, _] : sections_) {
    if (section.rfind("material.", 0) == 0) {
      names.push_back(section.substr(9));
    }
  }
  return names;
}

void RunConfig::check_all_used() const {
  for (const auto& [section, body] : sections_) {
    for (const auto& [key, entry] : body.entries) {
      if (!entry.used) {
        fail(entry.line, "unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
}

std::map<std::string, std::map<std::string, std::string>> RunConfig::snapshot() const {
  std::map<std::string, std::map<std::string, std::string>> out;
  for (const auto& [section, body] : sections_) {
    for (const auto& [key, entry] : body.entries) {
      out[section][key] = entry.value;
    }
  }
  return out;
}

MaterialRegistry materials_from_config(RunConfig& cfg) {
  MaterialRegistry registry = builtin_materials();
  for (const std::string& name : cfg.material_section_names()) {
    const std::string section = "material." + name;
    const std::string model = cfg.get_string(section, "model");
    if (model == "lorentz") {
      registry.insert_or_assign(
          name, PermittivityModel(LorentzOscillator::from_ev(
                    cfg.get_double(section, "eps_inf"), cfg.get_double(section, "omega_lo_ev"),
                    cfg.get_double(section, "omega_to_ev"), cfg.get_double(section, "gamma_ev"))));
    } else if (model == "drude") {
      registry.insert_or_assign(name, PermittivityModel(DrudeModel::from_ev(
                                          cfg.get_double(section, "omega_p_ev"),
                                          cfg.get_double(section, "gamma_ev"))));
    } else if (model == "constant") {
      registry.insert_or_assign(
          name, PermittivityModel::constant({cfg.get_double(section, "eps_re"),
                                             cfg.get_double(section, "eps_im", 0.0)}));
    } else {
      throw ConfigError(cfg.name() + ": material model must be lorentz, drude or constant, got '" +
                        model + "' in [" + section + "]");
    }
  }
  return registry;
}

const PermittivityModel& resolve_material(const MaterialRegistry& registry,
                                          const std::string& name, const RunConfig& cfg) {
  const auto it = registry.find(name);
  if (it == registry.end()) {
    std::string known;
    for (const auto& [key, _] : registry) {
      if (!known.empty()) known += ", ";
      known += key;
    }
    throw ConfigError(cfg.name() + ": unknown material '" + name + "' (available: " + known + ")");
  }
  return it->second;
}

SceneObject object_from_config(RunConfig& cfg, const MaterialRegistry& registry,
                               const std::string& section) {
  if (!cfg.has_section(section)) {
    throw ConfigError(cfg.name() + ": missing required section [" + section + "]");
  }
  PermittivityModel material =
      resolve_material(registry, cfg.get_string(section, "material"), cfg);
  if (cfg.has(section, "detune")) {
    material = material.detuned(cfg.get_double(section, "detune"));
  }
  const double r_par = cfg.get_double(section, "r_par_nm") * 1e-9;
  const double r_perp = cfg.get_double(section, "r_perp_nm") * 1e-9;
  const double theta = cfg.get_double(section, "theta_deg", 90.0) * constants::pi / 180.0;
  return {Spheroid(r_par, r_perp, std::move(material)), theta};
}

QuadratureSpec quadrature_from_config(RunConfig& cfg) {
  QuadratureSpec spec;
  spec.rel_tol = cfg.get_double("quadrature", "rel_tol", spec.rel_tol);
  spec.abs_floor = cfg.get_double("quadrature", "abs_floor", spec.abs_floor);
  spec.omega_max_factor = cfg.get_double("quadrature", "omega_max_factor", spec.omega_max_factor);
  spec.panel_budget = cfg.get_int("quadrature", "panel_budget", spec.panel_budget);
  spec.auto_seeds = cfg.get_bool("quadrature", "auto_seeds", spec.auto_seeds);
  for (double ev : cfg.get_double_list("quadrature", "seed_points_ev")) {
    spec.seed_points.push_back(ev_to_rad_s(ev));
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.name() + ": [quadrature] " + e.what());
  }
  return spec;
}

}  // namespace nanoheat
