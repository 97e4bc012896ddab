#pragma once

#include <vector>

#include "uavplace/model.hpp"

// Fleet-aware link evaluation. Interference follows two separate models:
// UAV-to-UE legs reuse the probabilistic air-to-ground loss, while the GBS
// terrestrial leg and UAV interference into GBS-served UEs use the r^-alpha
// power law at mean (unit) fading gain.

namespace uavplace::channel {

// Terrestrial power-law gain; ranges under 1 m clamp to 1 m to stay finite.
double terrestrial_gain(double r_m, double alpha);

// GBS power received at a UE position over the terrestrial leg.
double gbs_interference_at(const Point2& ue, const Point2& gbs, const RadioConfig& cfg);

// Per-UAV interfering power: the sum of the UAV's per-UE allocations capped
// at the hardware budget p_uav.
std::vector<double> uav_effective_powers(const std::vector<UavPlacement>& fleet,
                                         const Association& assoc, const RadioConfig& cfg);

// Co-channel power from every other UAV whose disc covers the UE.
double uav_interference_at(const Point2& ue, int exclude_uav,
                           const std::vector<UavPlacement>& fleet,
                           const std::vector<double>& eff_power_mw, const RadioConfig& cfg,
                           const EnvironmentParams& env);

// Downlink SINR of one UAV-served UE from explicit link terms.
double uav_ue_sinr(double power_mw, double path_loss_db, double interference_mw,
                   double b_alloc, const RadioConfig& cfg);

// Same SINR assembled from stored association state (power, bandwidth) for
// UE index ue served by fleet[uav]; interference gathered from the fleet.
double uav_ue_sinr(Eigen::Index ue, int uav, const std::vector<UavPlacement>& fleet,
                   const Association& assoc, const Scenario& s);

// GBS downlink SINR with the whole fleet interfering over the power law.
double gbs_ue_sinr(const Point2& ue, const std::vector<UavPlacement>& fleet,
                   const std::vector<double>& eff_power_mw, double b_alloc, const Scenario& s);

// Uncapped transmit power a UAV spends across its UEs.
double uav_total_power(int uav, const Association& assoc);

// Aggregate allocated rate carried by a UAV.
double uav_total_rate(int uav, const Association& assoc);

}  // namespace uavplace::channel
