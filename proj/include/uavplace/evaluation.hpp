#pragma once

#include <vector>

#include "uavplace/model.hpp"

namespace uavplace::evaluation {

// Largest GBS user count that still leaves every admitted user its minimum
// rate: floor(B * log2(1 + sinr_threshold) / c_min).
int gbs_user_cap(const channel::RadioConfig& cfg);

// Downlink budget of the GBS, c_min per admitted-user slot (or the
// configured override when set).
double gbs_capacity(const channel::RadioConfig& cfg);

// Refresh bandwidth shares, SINR, and rates for one fleet snapshot.
// Transmit powers in assoc.power_mw are inputs. Every served UE gets an
// equal split of its server's band; a UE below the SINR threshold carries
// rate 0. GBS rates are allocations: a c_min floor per admitted user plus
// surplus handed greedily to the strongest users, the total shaved just
// under the GBS budget; the result never exceeds the Shannon bound.
void recompute(const Scenario& s, const std::vector<UavPlacement>& fleet, Association& assoc);

double sumrate(const Association& assoc);

// C1..C6 margins in native units (m, bps, users); satisfied iff margin >= 0.
// Minima over an empty fleet report +infinity.
ConstraintReport check_constraints(const Scenario& s, const std::vector<UavPlacement>& fleet,
                                   const Association& assoc);

}  // namespace uavplace::evaluation
