#pragma once

#include "sdq/profile.hpp"

namespace fixtures {

// lambda = mu = 1, service drift mu* = 1
inline sdq::SpeedProfile single_region() { return sdq::SpeedProfile::single({1.0, 1.0, 0.0, 1.0}); }

// level 1; (1,1) below with mu* = 1, (2,2) above with mu* = 2
inline sdq::SpeedProfile two_region() {
  return sdq::SpeedProfile({1.0}, {{1.0, 1.0, 0.0, 1.0}, {2.0, 2.0, 0.0, 2.0}});
}

// plain M/M/1 with lambda = 1, mu = 1.2, no heavy-traffic family
inline sdq::SpeedProfile mm1_constant() { return sdq::SpeedProfile::single({1.0, 1.2, 0.0, 0.0}); }

inline sdq::RenewalSpec expo() { return sdq::make_renewal(sdq::RenewalKind::Exponential); }

}  // namespace fixtures
