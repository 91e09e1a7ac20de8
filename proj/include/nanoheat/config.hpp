#ifndef NANOHEAT_CONFIG_HPP
#define NANOHEAT_CONFIG_HPP

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nanoheat/materials.hpp"
#include "nanoheat/spectral.hpp"
#include "nanoheat/spheroid.hpp"

namespace nanoheat {

// Anything wrong with user input: parse failures, bad values, unknown keys.
// Messages carry file:line context where available.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// INI-style run configuration:
//   - full-line comments start with '#' or ';'
//   - [section] headers; dots allowed in names ([material.SiC2])
//   - key = value entries
// Values are kept as strings until a task asks for them; every key must be
// consumed by the task, so typos surface as errors instead of silently
// falling back to defaults.
class RunConfig {
 public:
  static RunConfig parse_file(const std::filesystem::path& path);
  static RunConfig parse_string(const std::string& text, const std::string& name);

  // "section.key=value" (sections may contain dots: material.SiC2.gamma_ev).
  void apply_override(const std::string& assignment);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key);
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback);
  double get_double(const std::string& section, const std::string& key);
  double get_double(const std::string& section, const std::string& key, double fallback);
  int get_int(const std::string& section, const std::string& key, int fallback);
  bool get_bool(const std::string& section, const std::string& key, bool fallback);
  std::vector<double> get_double_list(const std::string& section, const std::string& key);

  // Names of [material.*] sections (the suffix after "material.").
  std::vector<std::string> material_section_names() const;

  // Throws if any parsed key was never read by the task.
  void check_all_used() const;

  const std::string& name() const { return name_; }
  const std::vector<std::string>& overrides() const { return overrides_; }

  // section -> key -> value snapshot (for manifests).
  std::map<std::string, std::map<std::string, std::string>> snapshot() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
  };
  struct Section {
    std::map<std::string, Entry> entries;
    int line = 0;
  };

  Entry* find(const std::string& section, const std::string& key);
  Entry& require(const std::string& section, const std::string& key);
  [[noreturn]] void fail(int line, const std::string& message) const;

  std::map<std::string, Section> sections_;
  std::string name_ = "<none>";
  std::vector<std::string> overrides_;
};

// Builtin materials plus any [material.*] sections (which may shadow builtins).
MaterialRegistry materials_from_config(RunConfig& cfg);

const PermittivityModel& resolve_material(const MaterialRegistry& registry,
                                          const std::string& name, const RunConfig& cfg);

// [object.N]: material, r_par_nm, r_perp_nm, optional theta_deg (default 90)
// and detune (omega_lo^2 scale, Lorentz materials only).
struct SceneObject {
  Spheroid spheroid;
  double theta;  // rad
};
SceneObject object_from_config(RunConfig& cfg, const MaterialRegistry& registry,
                               const std::string& section);

// [quadrature] with optional seed_points_ev list.
QuadratureSpec quadrature_from_config(RunConfig& cfg);

}  // namespace nanoheat

#endif
