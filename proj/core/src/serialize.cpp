#include "mamax/serialize.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace mamax {

namespace {

using nlohmann::json;

void expect_keys(const json& obj, std::initializer_list<const char*> allowed,
                 const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) known = true;
    if (!known) throw std::invalid_argument("unknown key " + where + "." + item.key());
  }
}

json config_to_value(const ScenarioConfig& c) {
  return json{{"num_users", c.num_users},
              {"num_antennas", c.num_antennas},
              {"paths_per_user", c.paths_per_user},
              {"wavelength", c.wavelength},
              {"region_size", c.region_size},
              {"min_dist", c.min_dist},
              {"p_max", c.p_max},
              {"noise_power", c.noise_power},
              {"pathloss_ref", c.pathloss_ref},
              {"pathloss_exp", c.pathloss_exp},
              {"distance_min", c.distance_min},
              {"distance_max", c.distance_max},
              {"rng_seed", c.rng_seed}};
}

ScenarioConfig config_from_value(const json& v, const std::string& where) {
  expect_keys(v,
              {"num_users", "num_antennas", "paths_per_user", "wavelength", "region_size",
               "min_dist", "p_max", "noise_power", "pathloss_ref", "pathloss_exp", "distance_min",
               "distance_max", "rng_seed"},
              where);
  ScenarioConfig c;
  if (v.contains("num_users")) c.num_users = v.at("num_users").get<int>();
  if (v.contains("num_antennas")) c.num_antennas = v.at("num_antennas").get<int>();
  if (v.contains("paths_per_user")) c.paths_per_user = v.at("paths_per_user").get<int>();
  if (v.contains("wavelength")) c.wavelength = v.at("wavelength").get<double>();
  if (v.contains("region_size")) c.region_size = v.at("region_size").get<double>();
  if (v.contains("min_dist")) c.min_dist = v.at("min_dist").get<double>();
  if (v.contains("p_max")) c.p_max = v.at("p_max").get<double>();
  if (v.contains("noise_power")) c.noise_power = v.at("noise_power").get<double>();
  if (v.contains("pathloss_ref")) c.pathloss_ref = v.at("pathloss_ref").get<double>();
  if (v.contains("pathloss_exp")) c.pathloss_exp = v.at("pathloss_exp").get<double>();
  if (v.contains("distance_min")) c.distance_min = v.at("distance_min").get<double>();
  if (v.contains("distance_max")) c.distance_max = v.at("distance_max").get<double>();
  if (v.contains("rng_seed")) c.rng_seed = v.at("rng_seed").get<std::uint64_t>();
  return c;
}

json parse_or_throw(const std::string& text, const std::string& what) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) throw std::invalid_argument(what + " is not valid JSON");
  return v;
}

}  // namespace

std::string to_json(const ScenarioConfig& config) { return config_to_value(config).dump(2); }

ScenarioConfig scenario_config_from_json(const std::string& text) {
  return config_from_value(parse_or_throw(text, "config"), "config");
}

std::string to_json(const ScenarioInstance& instance) {
  json users = json::array();
  for (const auto& user : instance.users) {
    json paths = json::array();
    for (Eigen::Index l = 0; l < user.path_response().size(); ++l)
      paths.push_back({user.path_response()[l].real(), user.path_response()[l].imag()});
    json elevation = json::array(), azimuth = json::array();
    for (Eigen::Index l = 0; l < user.elevation().size(); ++l) {
      elevation.push_back(user.elevation()[l]);
      azimuth.push_back(user.azimuth()[l]);
    }
    users.push_back({{"distance", user.distance()},
                     {"elevation", elevation},
                     {"azimuth", azimuth},
                     {"path_response", paths}});
  }
  return json{{"config", config_to_value(instance.config)}, {"users", users}}.dump(2);
}

ScenarioInstance instance_from_json(const std::string& text) {
  json v = parse_or_throw(text, "instance");
  expect_keys(v, {"config", "users"}, "instance");
  if (!v.contains("config") || !v.contains("users"))
    throw std::invalid_argument("instance requires config and users");

  ScenarioInstance instance;
  instance.config = config_from_value(v.at("config"), "instance.config");
  const json& users = v.at("users");
  if (!users.is_array()) throw std::invalid_argument("instance.users must be an array");
  if (static_cast<int>(users.size()) != instance.config.num_users)
    throw std::invalid_argument("instance.users length must equal num_users");

  for (const auto& uv : users) {
    expect_keys(uv, {"distance", "elevation", "azimuth", "path_response"}, "instance.users[]");
    const json& elevation = uv.at("elevation");
    const json& azimuth = uv.at("azimuth");
    const json& paths = uv.at("path_response");
    if (!elevation.is_array() || !azimuth.is_array() || !paths.is_array())
      throw std::invalid_argument("per-path fields must be arrays");
    if (static_cast<int>(paths.size()) != instance.config.paths_per_user)
      throw std::invalid_argument("path_response length must equal paths_per_user");

    Eigen::ArrayXd el(elevation.size()), az(azimuth.size());
    Eigen::VectorXcd g(paths.size());
    for (std::size_t l = 0; l < elevation.size(); ++l) el[static_cast<Eigen::Index>(l)] = elevation[l].get<double>();
    for (std::size_t l = 0; l < azimuth.size(); ++l) az[static_cast<Eigen::Index>(l)] = azimuth[l].get<double>();
    for (std::size_t l = 0; l < paths.size(); ++l) {
      const json& pair = paths[l];
      if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument("path_response entries must be [re, im] pairs");
      g[static_cast<Eigen::Index>(l)] =
          std::complex<double>(pair[0].get<double>(), pair[1].get<double>());
    }
    instance.users.emplace_back(std::move(el), std::move(az), std::move(g),
                                uv.at("distance").get<double>());
  }
  return instance;
}

}  // namespace mamax
