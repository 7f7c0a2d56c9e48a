#include "mamax/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mamax/rng.hpp"

namespace mamax {

namespace {
constexpr double kHalfPi = 1.5707963267948966;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}
}  // namespace

void ScenarioConfig::validate() const {
  require(num_users >= 1, "num_users must be at least 1");
  require(num_antennas >= 1, "num_antennas must be at least 1");
  require(num_users <= num_antennas,
          "num_users (" + std::to_string(num_users) + ") must not exceed num_antennas (" +
              std::to_string(num_antennas) + ")");
  require(paths_per_user >= 1, "paths_per_user must be at least 1");
  require(wavelength > 0.0, "wavelength must be positive");
  require(region_size > 0.0, "region_size must be positive");
  require(min_dist >= 0.0, "min_dist must be nonnegative");
  require(p_max > 0.0, "p_max must be positive");
  require(noise_power > 0.0, "noise_power must be positive");
  require(pathloss_ref > 0.0, "pathloss_ref must be positive");
  require(distance_min > 0.0, "distance_min must be positive");
  require(distance_max >= distance_min, "distance_max must be at least distance_min");
}

ScenarioInstance generate_scenario(const ScenarioConfig& config) {
  config.validate();
  Rng rng(config.rng_seed);
  ScenarioInstance instance;
  instance.config = config;
  instance.users.reserve(static_cast<std::size_t>(config.num_users));
  const int paths = config.paths_per_user;
  for (int k = 0; k < config.num_users; ++k) {
    double distance = rng.uniform(config.distance_min, config.distance_max);
    Eigen::ArrayXd elevation(paths), azimuth(paths);
    for (int l = 0; l < paths; ++l) elevation[l] = rng.uniform(-kHalfPi, kHalfPi);
    for (int l = 0; l < paths; ++l) azimuth[l] = rng.uniform(-kHalfPi, kHalfPi);
    double variance =
        config.pathloss_ref * std::pow(distance, -config.pathloss_exp) / static_cast<double>(paths);
    Eigen::VectorXcd response(paths);
    for (int l = 0; l < paths; ++l) response[l] = rng.complex_normal(variance);
    instance.users.emplace_back(std::move(elevation), std::move(azimuth), std::move(response),
                                distance);
  }
  return instance;
}

AntennaPositioningVector fpa_apv(const ScenarioConfig& config) {
  config.validate();
  const int m_total = config.num_antennas;
  int rows = 1;
  for (int r = 1; r * r <= m_total; ++r)
    if (m_total % r == 0) rows = r;
  const int cols = m_total / rows;
  const double spacing = config.wavelength / 2.0;
  const double half = config.region_size / 2.0;
  AntennaPositioningVector apv(static_cast<std::size_t>(m_total));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      AntennaPosition pos;
      pos.x = (c - (cols - 1) / 2.0) * spacing;
      pos.y = (r - (rows - 1) / 2.0) * spacing;
      if (std::abs(pos.x) > half || std::abs(pos.y) > half)
        throw std::runtime_error("fixed grid does not fit inside the movable region");
      apv[static_cast<std::size_t>(r * cols + c)] = pos;
    }
  }
  return apv;
}

}  // namespace mamax
