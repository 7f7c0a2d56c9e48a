#pragma once

#include <cstdint>
#include <vector>

#include "mamax/channel.hpp"

namespace mamax {

// Physical setup of one experiment. Linear units throughout: meters, watts.
// Defaults reproduce the evaluation setup used across the result figures.
struct ScenarioConfig {
  int num_users = 12;
  int num_antennas = 16;
  int paths_per_user = 10;
  double wavelength = 0.1;        // m
  double region_size = 0.3;       // side A of the square movable region, m
  double min_dist = 0.05;         // inter-antenna spacing floor D, m
  double p_max = 0.01;            // per-user transmit power cap, W (10 dBm)
  double noise_power = 1e-11;     // receiver noise, W (-80 dBm)
  double pathloss_ref = 1e-4;     // path loss at 1 m (-40 dB)
  double pathloss_exp = 2.8;
  double distance_min = 20.0;     // user distance range, m
  double distance_max = 100.0;
  std::uint64_t rng_seed = 1;

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

// One concrete random draw: the per-user multipath geometry and responses.
struct ScenarioInstance {
  ScenarioConfig config;
  std::vector<UserChannelSpec> users;
};

// Draws one instance from config.rng_seed. Per user, in order: distance, all
// elevations, all azimuths, all path responses. Path response variance is
// pathloss_ref * distance^-pathloss_exp / paths_per_user, so the expected
// channel gain per antenna is the full large-scale loss.
ScenarioInstance generate_scenario(const ScenarioConfig& config);

// Fixed half-wavelength rectangular grid centered in the region, rows x cols
// with rows the largest divisor of num_antennas not exceeding its square
// root. Antennas are numbered row-major. Throws if the grid does not fit in
// [-region_size/2, region_size/2]^2.
AntennaPositioningVector fpa_apv(const ScenarioConfig& config);

}  // namespace mamax
