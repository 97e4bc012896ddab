#include "uavplace/link.hpp"

#include <algorithm>
#include <cmath>

namespace uavplace::channel {

double terrestrial_gain(double r_m, double alpha) {
    return std::pow(std::max(r_m, 1.0), -alpha);
}

double gbs_interference_at(const Point2& ue, const Point2& gbs, const RadioConfig& cfg) {
    return cfg.p_g_mw * terrestrial_gain((ue - gbs).norm(), cfg.alpha);
}

std::vector<double> uav_effective_powers(const std::vector<UavPlacement>& fleet,
                                         const Association& assoc, const RadioConfig& cfg) {
    std::vector<double> eff(fleet.size(), 0.0);
    for (Eigen::Index i = 0; i < assoc.size(); ++i) {
        const int s = assoc.serving(i);
        if (s >= 1 && s <= static_cast<int>(fleet.size())) eff[s - 1] += assoc.power_mw(i);
    }
    for (double& p : eff) p = std::min(p, cfg.p_uav_mw);
    return eff;
}

double uav_interference_at(const Point2& ue, int exclude_uav,
                           const std::vector<UavPlacement>& fleet,
                           const std::vector<double>& eff_power_mw, const RadioConfig& cfg,
                           const EnvironmentParams& env) {
    double sum = 0.0;
    for (std::size_t j = 0; j < fleet.size(); ++j) {
        if (static_cast<int>(j) == exclude_uav) continue;
        if (eff_power_mw[j] <= 0.0) continue;
        if (!geometry::point_in_disc(ue, fleet[j].disc())) continue;
        const double loss = atg_path_loss(fleet[j].altitude_m, (ue - fleet[j].center).norm(),
                                          cfg, env);
        sum += eff_power_mw[j] * db_to_linear(-loss);
    }
    return sum;
}

double uav_ue_sinr(double power_mw, double path_loss_db, double interference_mw,
                   double b_alloc, const RadioConfig& cfg) {
    return power_mw * db_to_linear(-path_loss_db) /
           (interference_mw + b_alloc * cfg.n0_mw_hz);
}

double uav_ue_sinr(Eigen::Index ue, int uav, const std::vector<UavPlacement>& fleet,
                   const Association& assoc, const Scenario& s) {
    const Point2 pos = s.ue.row(ue);
    const UavPlacement& u = fleet[static_cast<std::size_t>(uav)];
    const auto eff = uav_effective_powers(fleet, assoc, s.radio);
    const double loss = atg_path_loss(u.altitude_m, (pos - u.center).norm(), s.radio, s.env);
    const double interference = gbs_interference_at(pos, s.gbs, s.radio) +
                                uav_interference_at(pos, uav, fleet, eff, s.radio, s.env);
    return uav_ue_sinr(assoc.power_mw(ue), loss, interference, assoc.bandwidth_hz(ue), s.radio);
}

double gbs_ue_sinr(const Point2& ue, const std::vector<UavPlacement>& fleet,
                   const std::vector<double>& eff_power_mw, double b_alloc, const Scenario& s) {
    const double signal = s.radio.p_g_mw * terrestrial_gain((ue - s.gbs).norm(), s.radio.alpha);
    double interference = 0.0;
    for (std::size_t j = 0; j < fleet.size(); ++j) {
        interference += eff_power_mw[j] *
                        terrestrial_gain((ue - fleet[j].center).norm(), s.radio.alpha);
    }
    return signal / (interference + b_alloc * s.radio.n0_mw_hz);
}

double uav_total_power(int uav, const Association& assoc) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < assoc.size(); ++i)
        if (assoc.serving(i) == uav + 1) sum += assoc.power_mw(i);
    return sum;
}

double uav_total_rate(int uav, const Association& assoc) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < assoc.size(); ++i)
        if (assoc.serving(i) == uav + 1) sum += assoc.rate_bps(i);
    return sum;
}

}  // namespace uavplace::channel
