#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "snum/snumbers.hpp"

namespace snum {

struct Config {
  double kg_constant = 1.78222;
  std::map<double, double> kappa;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  std::size_t cap_width_oracle = 12;
  std::size_t cap_auerbach = 6;
  std::string output_dir = ".";

  Constants constants() const;
};

// Defaults merged with the JSON file at `path` (if any). Unknown keys,
// non-positive tolerance, caps below 2 and kappa values outside (0, 1]
// raise ConfigError.
Config load_config(const std::optional<std::string>& path);
Config parse_config(const std::string& text);

}  // namespace snum
