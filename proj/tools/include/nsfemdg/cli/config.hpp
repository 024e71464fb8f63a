#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nsfemdg/mesh.hpp"
#include "nsfemdg/scheme.hpp"

namespace nsfemdg::cli {

/// Bad configuration; the message names the file line or flag.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int n = 2;
  Box box;
  double T = 0.5;
  SchemeParams params;

  std::string preset = "stationary";  // stationary | bump | shear
  double rho_bar = 1.0;
  double amplitude = 0.5;
  double sigma = 0.2;

  std::string output_dir = "nsfemdg_out";
  int cadence = 1;

  std::string study = "rates";  // rates | cauchy | pdecay
  std::vector<int> study_n{2, 4, 8};

  // Test hook: negate the upwind mass flux in the assembled scheme.
  bool corrupt_flux_sign = false;

  std::vector<std::string> warnings;

  void validate();
};

/// Every accepted key; flags are the same names prefixed with "--".
const std::vector<std::string>& config_keys();

/// Applies one key/value pair. `where` names the source for error messages.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where);

/// Reads "key = value" lines (# starts a comment) from `path` (empty: none),
/// then applies `overrides` in order, then validates.
RunConfig parse_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Same as parse_config but from text already in memory.
RunConfig parse_config_text(const std::string& text, const std::string& source_name,
                            const std::vector<std::pair<std::string, std::string>>& overrides = {});

}  // namespace nsfemdg::cli
