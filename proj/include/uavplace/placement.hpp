#pragma once

#include <vector>

#include "uavplace/model.hpp"

namespace uavplace::placement {

// Powered links target slightly above the gates they must clear: the SINR
// target sits above the association threshold and the rate target above
// c_min, so a link that lands on target passes instead of tying. The rate
// headroom also absorbs the residual interference drift left by the single
// power sweep per refinement iteration.
inline constexpr double kSinrMargin = 1.001;
inline constexpr double kRateMargin = 1.0001;

// Admit the strongest users to the GBS, best SINR first, until the user cap
// or the SINR threshold stops admission. SINR here is the bootstrap value
// over the full access band with no fleet in the air; users admitted under
// it keep a workable SINR for any later bandwidth split. Everyone else is
// left unserved for the fleet to pick up.
Association initial_gbs_association(const Scenario& s);

// Smallest fleet able to carry n_users * c_min when each UAV tops out at
// c_hat_bps. Pure ceiling arithmetic; 0 when there is no demand.
int fleet_size_lower_bound(Eigen::Index n_users, double c_min_bps, double c_hat_bps);

// First fleet size: remaining demand over an optimistic per-UAV ceiling
// (access Shannon limit at the SINR threshold vs. backhaul across the area
// diagonal at h_max), refined once because the backhaul share itself depends
// on k. Returns 0 when the GBS already serves everyone. Throws
// FleetExhaustedError when even the ceiling needs more than k_max UAVs.
int initial_k(const Scenario& s, Eigen::Index n_uav_users);

// Rebuild each UAV's disc (minimum covering circle over its members),
// altitude (loss-minimizing for that radius, floor 1 m), and backhaul share
// (equal split of the pool). Memberless UAVs keep their previous placement.
// Throws InfeasibleRadiusError when a disc cannot meet l_max at any altitude.
void refine_placements(const Scenario& s, const Association& assoc,
                       std::vector<UavPlacement>& fleet);

// One Jacobi power step: re-target every UAV-served UE's power against the
// interference implied by the powers currently stored in assoc. One step per
// refinement iteration; the loop around it, not an inner fixed point, brings
// the coupled power-interference system to rest.
void sweep_powers(const Scenario& s, const std::vector<UavPlacement>& fleet, Association& assoc);

// Repair pass over every UE that is unserved or whose SINR does not clear
// the threshold: each is tried against the other UAVs nearest-first (trial
// bandwidth and power as if it joined) and the first UAV whose trial SINR
// clears the threshold adopts it; with no taker the UE is marked unserved.
// Returns whether any label moved.
bool reassociate(const Scenario& s, const std::vector<UavPlacement>& fleet, Association& assoc);

// Full optimization: grow the fleet from initial_k until every constraint
// holds with everyone served. On exhaustion the best attempt (fewest
// unserved, then highest sumrate) is returned with status fleet_exhausted.
PlacementResult place(const Scenario& s);

// GBS-only baseline: initial admission, no fleet.
PlacementResult place_gbs_only(const Scenario& s);

}  // namespace uavplace::placement
