#include "mamax/channel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace mamax {

namespace {
constexpr double kHalfPi = 1.5707963267948966;
}

Eigen::VectorXd apv_to_flat(const AntennaPositioningVector& apv) {
  Eigen::VectorXd flat(2 * static_cast<Eigen::Index>(apv.size()));
  for (std::size_t m = 0; m < apv.size(); ++m) {
    flat[2 * static_cast<Eigen::Index>(m)] = apv[m].x;
    flat[2 * static_cast<Eigen::Index>(m) + 1] = apv[m].y;
  }
  return flat;
}

AntennaPositioningVector apv_from_flat(const Eigen::VectorXd& flat) {
  if (flat.size() % 2 != 0) throw std::invalid_argument("flat APV must have even length");
  AntennaPositioningVector apv(static_cast<std::size_t>(flat.size() / 2));
  for (std::size_t m = 0; m < apv.size(); ++m) {
    apv[m].x = flat[2 * static_cast<Eigen::Index>(m)];
    apv[m].y = flat[2 * static_cast<Eigen::Index>(m) + 1];
  }
  return apv;
}

UserChannelSpec::UserChannelSpec(Eigen::ArrayXd elevation, Eigen::ArrayXd azimuth,
                                 Eigen::VectorXcd path_response, double distance)
    : elevation_(std::move(elevation)),
      azimuth_(std::move(azimuth)),
      path_response_(std::move(path_response)),
      distance_(distance) {
  const Eigen::Index paths = path_response_.size();
  if (paths < 1) throw std::invalid_argument("user needs at least one path");
  if (elevation_.size() != paths || azimuth_.size() != paths)
    throw std::invalid_argument("per-path lists must have identical length");
  for (Eigen::Index l = 0; l < paths; ++l) {
    if (!(std::abs(elevation_[l]) <= kHalfPi) || !(std::abs(azimuth_[l]) <= kHalfPi))
      throw std::invalid_argument("path angles must lie in [-pi/2, pi/2]");
  }
  direction_x_ = elevation_.sin() * azimuth_.cos();
  direction_y_ = elevation_.cos();
}

double phase_difference(const AntennaPosition& pos, double elevation, double azimuth) {
  return pos.x * std::sin(elevation) * std::cos(azimuth) + pos.y * std::cos(elevation);
}

Eigen::VectorXcd field_response_vector(const AntennaPosition& pos, const UserChannelSpec& user,
                                       double wavelength) {
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
  const double wavenumber = 2.0 * M_PI / wavelength;
  const int paths = user.path_count();
  Eigen::VectorXcd frv(paths);
  for (int l = 0; l < paths; ++l) {
    double rho = pos.x * user.direction_x()[l] + pos.y * user.direction_y()[l];
    frv[l] = std::polar(1.0, wavenumber * rho);
  }
  return frv;
}

Eigen::VectorXcd channel_vector(const AntennaPositioningVector& apv, const UserChannelSpec& user,
                                double wavelength) {
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
  if (apv.empty()) throw std::invalid_argument("APV must hold at least one antenna");
  const double wavenumber = 2.0 * M_PI / wavelength;
  const int paths = user.path_count();
  const auto& dx = user.direction_x();
  const auto& dy = user.direction_y();
  const auto& g = user.path_response();
  Eigen::VectorXcd h(static_cast<Eigen::Index>(apv.size()));
  for (std::size_t m = 0; m < apv.size(); ++m) {
    std::complex<double> acc(0.0, 0.0);
    for (int l = 0; l < paths; ++l) {
      double rho = apv[m].x * dx[l] + apv[m].y * dy[l];
      acc += std::polar(1.0, -wavenumber * rho) * g[l];  // conjugate of the field response
    }
    h[static_cast<Eigen::Index>(m)] = acc;
  }
  return h;
}

ChannelMatrix channel_matrix(const AntennaPositioningVector& apv,
                             const std::vector<UserChannelSpec>& users, double wavelength) {
  if (users.empty()) throw std::invalid_argument("channel matrix needs at least one user");
  ChannelMatrix cm;
  cm.carrier_wavelength = wavelength;
  cm.entries.resize(static_cast<Eigen::Index>(apv.size()), static_cast<Eigen::Index>(users.size()));
  for (std::size_t k = 0; k < users.size(); ++k)
    cm.entries.col(static_cast<Eigen::Index>(k)) = channel_vector(apv, users[k], wavelength);
  return cm;
}

}  // namespace mamax
