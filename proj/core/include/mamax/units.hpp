#pragma once

#include <cmath>

namespace mamax {

inline double watts_from_dbm(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double dbm_from_watts(double watts) { return 10.0 * std::log10(watts * 1e3); }
inline double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }
inline double db_from_linear(double lin) { return 10.0 * std::log10(lin); }

}  // namespace mamax
