#include "uavplace/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "uavplace/errors.hpp"
#include "uavplace/link.hpp"

namespace uavplace::evaluation {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

int gbs_user_cap(const channel::RadioConfig& cfg) {
    return static_cast<int>(
        std::floor(channel::shannon_rate(cfg.sinr_threshold, cfg.bandwidth_hz) / cfg.c_min_bps));
}

double gbs_capacity(const channel::RadioConfig& cfg) {
    if (cfg.c_hat_g_override_bps > 0.0) return cfg.c_hat_g_override_bps;
    return gbs_user_cap(cfg) * cfg.c_min_bps;
}

void recompute(const Scenario& s, const std::vector<UavPlacement>& fleet, Association& assoc) {
    const Eigen::Index n = assoc.size();
    const auto& cfg = s.radio;

    // Only UAV-served UEs hold per-UE transmit power.
    for (Eigen::Index i = 0; i < n; ++i)
        if (assoc.serving(i) <= kServeGbs) assoc.power_mw(i) = 0.0;

    std::vector<int> count(fleet.size() + 1, 0);
    for (Eigen::Index i = 0; i < n; ++i)
        if (assoc.serving(i) >= 0) ++count[static_cast<std::size_t>(assoc.serving(i))];

    const auto eff = channel::uav_effective_powers(fleet, assoc, cfg);

    std::vector<Eigen::Index> gbs_ues;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int sv = assoc.serving(i);
        if (sv == kServeUnserved) {
            assoc.sinr(i) = 0.0;
            assoc.bandwidth_hz(i) = 0.0;
            assoc.rate_bps(i) = 0.0;
            continue;
        }
        const Point2 pos = s.ue.row(i);
        const double bw = cfg.bandwidth_hz / count[static_cast<std::size_t>(sv)];
        assoc.bandwidth_hz(i) = bw;
        if (sv == kServeGbs) {
            assoc.sinr(i) = channel::gbs_ue_sinr(pos, fleet, eff, bw, s);
            gbs_ues.push_back(i);  // rate set by the allocation pass below
        } else {
            const auto& u = fleet[static_cast<std::size_t>(sv - 1)];
            const double loss =
                channel::atg_path_loss(u.altitude_m, (pos - u.center).norm(), cfg, s.env);
            const double interference =
                channel::gbs_interference_at(pos, s.gbs, cfg) +
                channel::uav_interference_at(pos, sv - 1, fleet, eff, cfg, s.env);
            assoc.sinr(i) =
                channel::uav_ue_sinr(assoc.power_mw(i), loss, interference, bw, cfg);
            assoc.rate_bps(i) = channel::uav_ue_rate(assoc.sinr(i), bw, cfg);
        }
    }

    // GBS allocation: c_min floor per admitted user, then surplus to the
    // strongest links first, total shaved a hair under the budget so the
    // aggregate constraint holds with float headroom.
    const double budget = gbs_capacity(cfg) * (1.0 - 1e-12);
    std::vector<double> alloc(gbs_ues.size(), cfg.c_min_bps);
    double surplus = budget - cfg.c_min_bps * static_cast<double>(gbs_ues.size());
    if (surplus > 0.0 && !gbs_ues.empty()) {
        std::vector<std::size_t> order(gbs_ues.size());
        for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return assoc.sinr(gbs_ues[a]) > assoc.sinr(gbs_ues[b]);
        });
        for (std::size_t t : order) {
            const Eigen::Index i = gbs_ues[t];
            const double usable =
                channel::gbs_ue_rate(assoc.sinr(i), assoc.bandwidth_hz(i), cfg);
            const double grant = std::min(std::max(usable - alloc[t], 0.0), surplus);
            alloc[t] += grant;
            surplus -= grant;
            if (surplus <= 0.0) break;
        }
    }
    for (std::size_t t = 0; t < gbs_ues.size(); ++t) {
        const Eigen::Index i = gbs_ues[t];
        assoc.rate_bps(i) =
            std::min(alloc[t], channel::gbs_ue_rate(assoc.sinr(i), assoc.bandwidth_hz(i), cfg));
    }
}

double sumrate(const Association& assoc) { return assoc.rate_bps.sum(); }

ConstraintReport check_constraints(const Scenario& s, const std::vector<UavPlacement>& fleet,
                                   const Association& assoc) {
    const auto& cfg = s.radio;
    ConstraintReport rep;
    auto add = [&](const char* id, double margin, std::string detail) {
        rep.constraints.push_back({id, margin >= 0.0, margin, std::move(detail)});
    };
    // Detail strings name the worst violator (UAV ids 1-based as in serving labels).
    auto uav_id = [&](std::size_t j) {
        return fleet.empty() ? std::string("no uavs") : "worst uav " + std::to_string(j + 1);
    };

    double m1 = kInf;
    std::size_t w1 = 0;
    for (std::size_t j = 0; j < fleet.size(); ++j) {
        double m;
        try {
            m = channel::max_radius_for_altitude(fleet[j].altitude_m, cfg, s.env) -
                fleet[j].radius_m;
        } catch (const AltitudeBoundError&) {
            m = -kInf;  // altitude outside the box; C2 carries the magnitude
        }
        if (m < m1) {
            m1 = m;
            w1 = j;
        }
    }
    add("C1", m1, uav_id(w1));

    double m2 = kInf;
    std::size_t w2 = 0;
    for (std::size_t j = 0; j < fleet.size(); ++j) {
        const double m =
            std::min(fleet[j].altitude_m - cfg.h_min_m, cfg.h_max_m - fleet[j].altitude_m);
        if (m < m2) {
            m2 = m;
            w2 = j;
        }
    }
    add("C2", m2, uav_id(w2));

    double m3 = kInf;
    Eigen::Index w3 = 0;
    for (Eigen::Index i = 0; i < assoc.size(); ++i) {
        const double m = assoc.rate_bps(i) - cfg.c_min_bps;
        if (m < m3) {
            m3 = m;
            w3 = i;
        }
    }
    add("C3", m3, assoc.size() == 0 ? "no ues" : "worst ue " + std::to_string(w3));

    double gbs_load = 0.0;
    for (Eigen::Index i = 0; i < assoc.size(); ++i)
        if (assoc.serving(i) == kServeGbs) gbs_load += assoc.rate_bps(i);
    add("C4", gbs_capacity(cfg) - gbs_load, "gbs");

    double m5 = kInf;
    std::size_t w5 = 0;
    for (std::size_t j = 0; j < fleet.size(); ++j) {
        const auto& u = fleet[j];
        const double d = std::sqrt((u.center - s.gbs).squaredNorm() + u.altitude_m * u.altitude_m);
        const double cap = channel::backhaul_capacity(d, u.backhaul_alloc_hz, cfg);
        const double m = cap - channel::uav_total_rate(static_cast<int>(j), assoc);
        if (m < m5) {
            m5 = m;
            w5 = j;
        }
    }
    add("C5", m5, uav_id(w5));

    int unserved = 0;
    Eigen::Index first_unserved = -1;
    for (Eigen::Index i = 0; i < assoc.size(); ++i)
        if (assoc.serving(i) == kServeUnserved) {
            if (first_unserved < 0) first_unserved = i;
            ++unserved;
        }
    add("C6", -static_cast<double>(unserved),
        unserved == 0 ? "all served"
                      : std::to_string(unserved) + " unserved, first ue " +
                            std::to_string(first_unserved));

    return rep;
}

}  // namespace uavplace::evaluation
