#include "snum/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "snum/error.hpp"

namespace snum {

Constants Config::constants() const {
  Constants c;
  c.kg = kg_constant;
  c.kappa = kappa;
  return c;
}

namespace {

double number_field(const nlohmann::json& j, const char* key) {
  if (!j.is_number()) throw ConfigError(std::string("config field '") + key + "' must be a number");
  return j.get<double>();
}

std::size_t cap_field(const nlohmann::json& j, const char* key) {
  if (!j.is_number_integer() || j.get<long long>() < 2) {
    throw ConfigError(std::string("config field '") + key + "' must be an integer >= 2");
  }
  return j.get<std::size_t>();
}

}  // namespace

Config parse_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"kg_constant", "kappa",         "tolerance", "seed",
                                           "cap_width_oracle", "cap_auerbach", "output_dir"};
  Config cfg;
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    if (key == "kg_constant") {
      cfg.kg_constant = number_field(value, "kg_constant");
      if (!(cfg.kg_constant >= 1.0)) throw ConfigError("kg_constant must be >= 1");
    } else if (key == "tolerance") {
      cfg.tolerance = number_field(value, "tolerance");
      if (!(cfg.tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
        throw ConfigError("config field 'seed' must be a nonnegative integer");
      }
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "cap_width_oracle") {
      cfg.cap_width_oracle = cap_field(value, "cap_width_oracle");
    } else if (key == "cap_auerbach") {
      cfg.cap_auerbach = cap_field(value, "cap_auerbach");
    } else if (key == "output_dir") {
      if (!value.is_string()) throw ConfigError("config field 'output_dir' must be a string");
      cfg.output_dir = value.get<std::string>();
    } else if (key == "kappa") {
      if (!value.is_object()) throw ConfigError("config field 'kappa' must map p to kappa_p");
      for (const auto& [p_text, kv] : value.items()) {
        double p = 0.0;
        try {
          std::size_t used = 0;
          p = std::stod(p_text, &used);
          if (used != p_text.size()) throw std::invalid_argument(p_text);
        } catch (const std::exception&) {
          throw ConfigError("kappa key '" + p_text + "' is not a number");
        }
        const double kappa = number_field(kv, "kappa");
        if (!(kappa > 0.0 && kappa <= 1.0)) throw ConfigError("kappa_" + p_text + " must lie in (0, 1]");
        if (p == 2.0 && kappa != 1.0) throw ConfigError("kappa_2 is fixed to 1");
        if (!(p >= 2.0)) throw ConfigError("kappa is defined for p >= 2");
        cfg.kappa[p] = kappa;
      }
    }
  }
  return cfg;
}

Config load_config(const std::optional<std::string>& path) {
  if (!path) return Config{};
  std::ifstream in(*path);
  if (!in) throw IoError("cannot read config file '" + *path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace snum
