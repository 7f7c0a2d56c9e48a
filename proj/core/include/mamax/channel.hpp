#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mamax {

// Planar coordinates of one antenna inside the movable region, in meters,
// relative to the region center.
struct AntennaPosition {
  double x = 0.0;
  double y = 0.0;
};

using AntennaPositioningVector = std::vector<AntennaPosition>;

// Flat layout is [x0, y0, x1, y1, ...]; used by the swarm optimizer.
Eigen::VectorXd apv_to_flat(const AntennaPositioningVector& apv);
AntennaPositioningVector apv_from_flat(const Eigen::VectorXd& flat);

// Multipath description of one uplink user: per-path elevation/azimuth angles
// of arrival and complex path responses, plus the user's distance (kept for
// bookkeeping; the path responses already include the large-scale loss).
//
// Direction cosines are fixed by the angles, so they are precomputed once
// here; field-response evaluation inside the optimizer loops is then two
// multiplies and one complex exponential per path.
class UserChannelSpec {
 public:
  UserChannelSpec(Eigen::ArrayXd elevation, Eigen::ArrayXd azimuth,
                  Eigen::VectorXcd path_response, double distance);

  int path_count() const { return static_cast<int>(path_response_.size()); }
  const Eigen::ArrayXd& elevation() const { return elevation_; }
  const Eigen::ArrayXd& azimuth() const { return azimuth_; }
  const Eigen::VectorXcd& path_response() const { return path_response_; }
  double distance() const { return distance_; }

  // sin(elevation) * cos(azimuth) and cos(elevation), per path.
  const Eigen::ArrayXd& direction_x() const { return direction_x_; }
  const Eigen::ArrayXd& direction_y() const { return direction_y_; }

 private:
  Eigen::ArrayXd elevation_;
  Eigen::ArrayXd azimuth_;
  Eigen::VectorXcd path_response_;
  double distance_ = 0.0;
  Eigen::ArrayXd direction_x_;
  Eigen::ArrayXd direction_y_;
};

// Path-length difference of a plane wave from direction (elevation, azimuth)
// between `pos` and the region origin, in meters.
double phase_difference(const AntennaPosition& pos, double elevation, double azimuth);

// Per-path receive phasor of one antenna at `pos`: unit-modulus entries
// exp(j 2 pi / wavelength * phase_difference) stacked over the user's paths.
Eigen::VectorXcd field_response_vector(const AntennaPosition& pos, const UserChannelSpec& user,
                                       double wavelength);

// Uplink channel of one user seen by the whole array: entry m is the inner
// product of the antenna-m field response with the user's path responses.
Eigen::VectorXcd channel_vector(const AntennaPositioningVector& apv, const UserChannelSpec& user,
                                double wavelength);

// M x K channel; column k is channel_vector of user k at the same APV.
struct ChannelMatrix {
  Eigen::MatrixXcd entries;
  double carrier_wavelength = 0.0;
};

ChannelMatrix channel_matrix(const AntennaPositioningVector& apv,
                             const std::vector<UserChannelSpec>& users, double wavelength);

}  // namespace mamax
