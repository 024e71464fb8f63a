#include "nsfemdg/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace nsfemdg::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw ConfigError(where + ": " + what); }

double to_double(const std::string& v, const std::string& where, const std::string& key) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc{} || p != end || v.empty()) bad(where, "value of '" + key + "' is not a number: '" + v + "'");
  return x;
}

int to_int(const std::string& v, const std::string& where, const std::string& key) {
  int x = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc{} || p != end || v.empty()) bad(where, "value of '" + key + "' is not an integer: '" + v + "'");
  return x;
}

bool to_bool(const std::string& v, const std::string& where, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(where, "value of '" + key + "' is not a boolean: '" + v + "'");
}

std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(v);
  if (sep == ' ') {
    while (is >> item) out.push_back(item);
  } else {
    while (std::getline(is, item, sep)) out.push_back(trim(item));
  }
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "n",       "box",       "T",         "gamma",           "a",
      "epsilon", "kappa",     "c",         "newton_tol",      "newton_max_iter",
      "homotopy_steps",       "face_quad_degree",             "cell_quad_degree",
      "preset",  "rho_bar",   "amplitude", "sigma",           "output_dir",
      "cadence", "study",     "study_n",   "corrupt_flux_sign"};
  return keys;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where) {
  SchemeParams& p = cfg.params;
  if (key == "n") {
    cfg.n = to_int(value, where, key);
  } else if (key == "box") {
    const auto parts = split(value, ' ');
    if (parts.size() != 6) bad(where, "box expects six numbers: x0 y0 z0 x1 y1 z1");
    for (int i = 0; i < 3; ++i) {
      cfg.box.lower[i] = to_double(parts[static_cast<std::size_t>(i)], where, key);
      cfg.box.upper[i] = to_double(parts[static_cast<std::size_t>(i + 3)], where, key);
    }
  } else if (key == "T") {
    cfg.T = to_double(value, where, key);
  } else if (key == "gamma") {
    p.gamma = to_double(value, where, key);
  } else if (key == "a") {
    p.a = to_double(value, where, key);
  } else if (key == "epsilon") {
    p.epsilon = to_double(value, where, key);
  } else if (key == "kappa") {
    p.kappa = to_double(value, where, key);
  } else if (key == "c") {
    p.c = to_double(value, where, key);
  } else if (key == "newton_tol") {
    p.newton_tol = to_double(value, where, key);
  } else if (key == "newton_max_iter") {
    p.newton_max_iter = to_int(value, where, key);
  } else if (key == "homotopy_steps") {
    p.homotopy_steps = to_int(value, where, key);
  } else if (key == "face_quad_degree") {
    p.face_quad_degree = to_int(value, where, key);
  } else if (key == "cell_quad_degree") {
    p.cell_quad_degree = to_int(value, where, key);
  } else if (key == "preset") {
    cfg.preset = value;
  } else if (key == "rho_bar") {
    cfg.rho_bar = to_double(value, where, key);
  } else if (key == "amplitude") {
    cfg.amplitude = to_double(value, where, key);
  } else if (key == "sigma") {
    cfg.sigma = to_double(value, where, key);
  } else if (key == "output_dir") {
    if (value.empty()) bad(where, "output_dir must not be empty");
    cfg.output_dir = value;
  } else if (key == "cadence") {
    cfg.cadence = to_int(value, where, key);
  } else if (key == "study") {
    cfg.study = value;
  } else if (key == "study_n") {
    cfg.study_n.clear();
    for (const auto& s : split(value, ',')) cfg.study_n.push_back(to_int(s, where, key));
  } else if (key == "corrupt_flux_sign") {
    cfg.corrupt_flux_sign = to_bool(value, where, key);
  } else {
    bad(where, "unknown key '" + key + "'");
  }
}

void RunConfig::validate() {
  if (n < 1) throw ConfigError("n must be >= 1");
  for (int i = 0; i < 3; ++i) {
    if (!(box.upper[i] > box.lower[i])) throw ConfigError("box must have positive extent in every direction");
  }
  if (!(T >= 0.0)) throw ConfigError("T must be >= 0");
  if (cadence < 1) throw ConfigError("cadence must be >= 1");
  if (preset != "stationary" && preset != "bump" && preset != "shear") {
    throw ConfigError("unknown preset '" + preset + "' (stationary, bump, shear)");
  }
  if (!(rho_bar > 0.0)) throw ConfigError("rho_bar must be > 0");
  if (preset == "bump" && !(sigma > 0.0)) throw ConfigError("sigma must be > 0");
  if (preset == "bump" && rho_bar + std::min(amplitude, 0.0) < 0.0) {
    throw ConfigError("bump density would be negative");
  }
  if (study != "rates" && study != "cauchy" && study != "pdecay") {
    throw ConfigError("unknown study '" + study + "' (rates, cauchy, pdecay)");
  }
  if (study_n.size() < 2) throw ConfigError("study_n needs at least two mesh sizes");
  for (std::size_t i = 0; i < study_n.size(); ++i) {
    if (study_n[i] < 1 || (i > 0 && (study_n[i] <= study_n[i - 1] || study_n[i] % study_n[i - 1] != 0))) {
      throw ConfigError("study_n must be increasing, each a multiple of the previous");
    }
  }
  try {
    warnings = params.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig parse_config_text(const std::string& text, const std::string& source_name,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad(where, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) bad(where, "missing key");
    apply_setting(cfg, key, trim(line.substr(eq + 1)), where);
  }
  for (const auto& [key, value] : overrides) apply_setting(cfg, key, value, "flag --" + key);
  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::string text;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open configuration file");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_config_text(text, path.empty() ? "<defaults>" : path, overrides);
}

}  // namespace nsfemdg::cli
