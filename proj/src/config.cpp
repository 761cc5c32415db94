#include "towpde/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace towpde {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

VecN vec_from_list(const std::vector<double>& list, const char* what) {
  if (list.empty() || list.size() > 3)
    throw ValidationError(std::string(what) + ": expected 1..3 numbers");
  VecN v = VecN::zero(static_cast<int>(list.size()));
  for (std::size_t i = 0; i < list.size(); ++i) v[static_cast<int>(i)] = list[i];
  return v;
}

}  // namespace

IniDoc IniDoc::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

IniDoc IniDoc::parse_text(const std::string& text) {
  IniDoc doc;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ValidationError("config: malformed section header at line " +
                              std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      doc.sections_[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config: expected key = value at line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ValidationError("config: empty key at line " + std::to_string(lineno));
    doc.sections_[section][key] = value;
  }
  return doc;
}

bool IniDoc::has(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::string IniDoc::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return fallback;
  auto kit = it->second.find(key);
  return kit == it->second.end() ? fallback : kit->second;
}

std::string IniDoc::require(const std::string& section, const std::string& key) const {
  if (!has(section, key))
    throw ValidationError("config: missing [" + section + "] " + key);
  return get(section, key, "");
}

double IniDoc::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  if (!has(section, key)) return fallback;
  const std::string raw = get(section, key, "");
  try {
    std::size_t used = 0;
    double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config: [" + section + "] " + key + " is not a number: " + raw);
  }
}

long IniDoc::get_long(const std::string& section, const std::string& key, long fallback) const {
  if (!has(section, key)) return fallback;
  const std::string raw = get(section, key, "");
  try {
    std::size_t used = 0;
    long v = std::stol(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config: [" + section + "] " + key + " is not an integer: " + raw);
  }
}

uint64_t IniDoc::get_u64(const std::string& section, const std::string& key,
                         uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  const std::string raw = get(section, key, "");
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config: [" + section + "] " + key + " is not an integer: " + raw);
  }
}

bool IniDoc::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  std::string raw = get(section, key, "");
  std::transform(raw.begin(), raw.end(), raw.begin(), ::tolower);
  if (raw == "true" || raw == "1" || raw == "yes") return true;
  if (raw == "false" || raw == "0" || raw == "no") return false;
  throw ValidationError("config: [" + section + "] " + key + " is not a boolean: " + raw);
}

std::vector<double> IniDoc::get_list(const std::string& section, const std::string& key) const {
  std::vector<double> out;
  if (!has(section, key)) return out;
  std::istringstream ss(get(section, key, ""));
  std::string token;
  while (ss >> token) {
    try {
      out.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw ValidationError("config: [" + section + "] " + key + " has a bad entry: " + token);
    }
  }
  return out;
}

DomainGeometry domain_from_config(const IniDoc& ini) {
  std::string kind = ini.require("domain", "kind");
  if (kind == "interval") {
    return DomainGeometry::interval(ini.get_double("domain", "a", 0.0),
                                    ini.get_double("domain", "b", 1.0));
  }
  if (kind == "box") {
    return DomainGeometry::box(vec_from_list(ini.get_list("domain", "lo"), "domain lo"),
                               vec_from_list(ini.get_list("domain", "hi"), "domain hi"));
  }
  if (kind == "ball") {
    return DomainGeometry::ball(
        vec_from_list(ini.get_list("domain", "center"), "domain center"),
        ini.get_double("domain", "radius", 1.0));
  }
  if (kind == "annulus") {
    return DomainGeometry::annulus(
        vec_from_list(ini.get_list("domain", "center"), "domain center"),
        ini.get_double("domain", "r_inner", 0.25), ini.get_double("domain", "r_outer", 1.0));
  }
  throw ValidationError("config: unknown domain kind '" + kind + "'");
}

GameParams params_from_config(const IniDoc& ini, const DomainGeometry& domain) {
  int n = static_cast<int>(ini.get_long("params", "n", domain.dim()));
  if (n != domain.dim())
    throw ValidationError("config: [params] n disagrees with the domain dimension");
  double eps = ini.get_double("params", "eps", 0.1);
  double T = ini.get_double("params", "T", 1.0);
  bool has_p = ini.has("params", "p"), has_alpha = ini.has("params", "alpha");
  if (has_p && has_alpha) {
    double p = ini.get_double("params", "p", 2.0);
    double alpha = ini.get_double("params", "alpha", 0.0);
    if (std::abs(alpha - (p - 1.0) / (p + n)) > 1e-12)
      throw ValidationError("config: p and alpha are inconsistent");
    return GameParams::from_p(n, eps, p, T);
  }
  if (has_alpha) return GameParams::from_alpha(n, eps, ini.get_double("params", "alpha", 0.5), T);
  return GameParams::from_p(n, eps, ini.get_double("params", "p", 2.0), T);
}

DirectionSet dirs_from_config(const IniDoc& ini, int n) {
  DirectionSet fallback = DirectionSet::defaults(n);
  int count = static_cast<int>(
      ini.get_long("dirs", "count", static_cast<long>(fallback.vectors.size())));
  double theta_tol = ini.get_double("dirs", "theta_tol", fallback.theta_tol);
  std::string refine = ini.get("dirs", "refine", "local_bracket");
  Refinement r;
  if (refine == "local_bracket") {
    r = Refinement::LocalBracket;
  } else if (refine == "none") {
    r = Refinement::None;
  } else {
    throw ValidationError("config: [dirs] refine must be local_bracket or none");
  }
  return DirectionSet::make(n, count, r, theta_tol);
}

DataSpec data_from_config(const IniDoc& ini, const GameParams& params) {
  DataSpec spec;
  spec.name = ini.get("data", "f", "constant");
  std::optional<double> lipschitz;
  if (ini.has("data", "lipschitz")) lipschitz = ini.get_double("data", "lipschitz", 0.0);

  auto linear_fn = [&ini, &params](const std::string& key) {
    std::vector<double> coeffs = ini.get_list("data", key);
    if (coeffs.size() != static_cast<std::size_t>(params.n) + 1)
      throw ValidationError("config: [data] " + key + " needs 1 + n coefficients");
    return [coeffs](const VecN& x) {
      double v = coeffs[0];
      for (int a = 0; a < x.n; ++a) v += coeffs[static_cast<std::size_t>(a) + 1] * x[a];
      return v;
    };
  };

  if (spec.name == "constant") {
    double c = ini.get_double("data", "value", 1.0);
    spec.F = BoundaryData{[c](const SpaceTimePoint&) { return c; }, lipschitz.value_or(0.0)};
    spec.psi = [c](const VecN&) { return c; };
    spec.phi_init = [c](const VecN&, double) { return c; };
    return spec;
  }
  if (spec.name == "linear") {
    auto base = linear_fn("coeffs");
    double tc = ini.get_double("data", "t_coeff", 0.0);
    spec.F = BoundaryData{
        [base, tc](const SpaceTimePoint& z) { return base(z.x) + tc * z.t; }, lipschitz};
    spec.psi = base;
    spec.phi_init = [base, tc](const VecN& x, double t) { return base(x) + tc * t; };
    return spec;
  }
  if (spec.name == "heat_eigen") {
    if (params.n != 1 || std::abs(params.p - 2.0) > 1e-12)
      throw ValidationError("config: heat_eigen data requires n = 1 and p = 2");
    ReferenceSolution ref = heat_reference();
    spec.F = ref.fn.boundary_data(lipschitz);
    auto value = ref.fn.value;
    spec.psi = [value](const VecN& x) { return value(x, 0.0); };
    spec.phi_init = value;
    return spec;
  }
  if (spec.name == "ramp") {
    std::string psi_kind = ini.get("data", "psi", "linear");
    std::function<double(const VecN&)> psi;
    if (psi_kind == "linear") {
      psi = linear_fn("psi_coeffs");
    } else if (psi_kind == "constant") {
      double c = ini.get_double("data", "psi_value", 0.0);
      psi = [c](const VecN&) { return c; };
    } else {
      throw ValidationError("config: [data] psi must be linear or constant");
    }
    spec.psi = psi;
    std::string phi_kind = ini.get("data", "phi_init", "constant");
    if (phi_kind == "constant") {
      double c = ini.get_double("data", "phi_value", 0.0);
      spec.phi_init = [c](const VecN&, double) { return c; };
    } else {
      throw ValidationError("config: [data] phi_init must be constant (or use the barrier "
                            "option of the asymptotics run)");
    }
    BoundaryData ramp = ramp_boundary_data(spec.psi, spec.phi_init, params);
    ramp.lipschitz = lipschitz;
    spec.F = std::move(ramp);
    return spec;
  }
  throw ValidationError("config: unknown data f '" + spec.name + "'");
}

}  // namespace towpde
