#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "towpde/analysis.hpp"
#include "towpde/geometry.hpp"
#include "towpde/grid.hpp"
#include "towpde/quadrature.hpp"

namespace towpde {

// Minimal INI-style document: [section] headers, key = value lines, '#' or
// ';' comments. Unknown keys are tolerated; typed getters validate on use.
class IniDoc {
 public:
  static IniDoc parse_file(const std::string& path);
  static IniDoc parse_text(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  std::string require(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_long(const std::string& section, const std::string& key, long fallback) const;
  uint64_t get_u64(const std::string& section, const std::string& key, uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Fully resolved run description; validated before any computation starts.
struct RunConfig {
  std::string subcommand;
  std::string config_path;
  std::string out_dir = "out";
  uint64_t seed = 42;
  int threads = 0;
  bool quiet = false;
  IniDoc ini;
};

DomainGeometry domain_from_config(const IniDoc& ini);
GameParams params_from_config(const IniDoc& ini, const DomainGeometry& domain);
DirectionSet dirs_from_config(const IniDoc& ini, int n);

// Named boundary payload: the space-time payoff plus, for the elliptic and
// ramp problems, its time-independent boundary part and initial layer.
struct DataSpec {
  std::string name;
  BoundaryData F;
  std::function<double(const VecN&)> psi;
  std::function<double(const VecN&, double)> phi_init;
};

DataSpec data_from_config(const IniDoc& ini, const GameParams& params);

}  // namespace towpde
