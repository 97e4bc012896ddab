#include "uavplace/channel.hpp"

#include <numbers>
#include <string>

#include "uavplace/errors.hpp"

namespace uavplace::channel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRadiusTol = 0.01;    // bisection resolution (m)
constexpr double kAltitudeTol = 0.1;   // golden-section resolution (m)
constexpr double kRadiusCap = 1.0e7;   // search ceiling for max_radius (m)

double fspl_db(double d, double f_hz) {
    return 20.0 * std::log10(4.0 * kPi * d * f_hz / kSpeedOfLight);
}

}  // namespace

void EnvironmentParams::validate() const {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("environment: sigmoid parameters must be positive");
    if (eta_nlos_db < eta_los_db) throw Error("environment: eta_nlos_db below eta_los_db");
}

void RadioConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw Error(std::string("radio: ") + name + " must be positive");
    };
    positive(p_g_mw, "p_g_mw");
    positive(p_uav_mw, "p_uav_mw");
    positive(p_mmwave_mw, "p_mmwave_mw");
    positive(g_tx, "g_tx");
    positive(g_rx, "g_rx");
    if (!(alpha > 2.0)) throw Error("radio: alpha must exceed 2");
    positive(f_c_hz, "f_c_hz");
    positive(f_c_mmwave_hz, "f_c_mmwave_hz");
    positive(bandwidth_hz, "bandwidth_hz");
    positive(bandwidth_mmwave_total_hz, "bandwidth_mmwave_total_hz");
    positive(n0_mw_hz, "n0_mw_hz");
    positive(sinr_threshold, "sinr_threshold");
    positive(sinr_threshold_mmwave, "sinr_threshold_mmwave");
    positive(c_min_bps, "c_min_bps");
    positive(l_max_db, "l_max_db");
    if (!(h_min_m > 0.0) || !(h_max_m > h_min_m))
        throw Error("radio: altitude bounds require 0 < h_min_m < h_max_m");
    if (k_max < 0) throw Error("radio: k_max must be non-negative");
    if (c_hat_g_override_bps < 0.0) throw Error("radio: c_hat_g_override_bps must be >= 0");
}

double los_probability(double h, double r, const EnvironmentParams& env) {
    if (!(h > 0.0)) throw InvalidGeometryError("los_probability: altitude must be positive");
    if (r < 0.0) throw InvalidGeometryError("los_probability: negative ground distance");
    const double theta_deg = (r <= 0.0) ? 90.0 : (180.0 / kPi) * std::atan(h / r);
    return 1.0 / (1.0 + env.a * std::exp(-env.b * (theta_deg - env.a)));
}

double atg_path_loss(double h, double r, const RadioConfig& cfg, const EnvironmentParams& env) {
    if (h < cfg.h_min_m || h > cfg.h_max_m)
        throw AltitudeBoundError("atg_path_loss: altitude " + std::to_string(h) +
                                 " outside [" + std::to_string(cfg.h_min_m) + ", " +
                                 std::to_string(cfg.h_max_m) + "]");
    const double d = std::hypot(h, r);
    const double p = los_probability(h, r, env);
    return fspl_db(d, cfg.f_c_hz) + p * env.eta_los_db + (1.0 - p) * env.eta_nlos_db;
}

double max_radius_for_altitude(double h, const RadioConfig& cfg, const EnvironmentParams& env) {
    if (atg_path_loss(h, 0.0, cfg, env) > cfg.l_max_db) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (atg_path_loss(h, hi, cfg, env) <= cfg.l_max_db) {
        hi *= 2.0;
        if (hi >= kRadiusCap) return kRadiusCap;
    }
    while (hi - lo > kRadiusTol) {
        const double mid = 0.5 * (lo + hi);
        (atg_path_loss(h, mid, cfg, env) <= cfg.l_max_db ? lo : hi) = mid;
    }
    return lo;
}

double altitude_for_radius(double r, const RadioConfig& cfg, const EnvironmentParams& env) {
    const auto loss = [&](double h) { return atg_path_loss(h, r, cfg, env); };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = cfg.h_min_m;
    double hi = cfg.h_max_m;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = loss(x1);
    double f2 = loss(x2);
    while (hi - lo > kAltitudeTol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = loss(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = loss(x2);
        }
    }

    // The interval endpoints guard against minima pinned to the bounds.
    double best_h = 0.5 * (lo + hi);
    double best_f = loss(best_h);
    for (double cand : {cfg.h_min_m, cfg.h_max_m}) {
        const double f = loss(cand);
        if (f < best_f) {
            best_f = f;
            best_h = cand;
        }
    }
    if (best_f > cfg.l_max_db)
        throw InfeasibleRadiusError("altitude_for_radius: radius " + std::to_string(r) +
                                    " m needs " + std::to_string(best_f) + " dB > l_max " +
                                    std::to_string(cfg.l_max_db) + " dB");
    return best_h;
}

double backhaul_received_power(double d, const RadioConfig& cfg) {
    if (!(d > 0.0)) throw InvalidGeometryError("backhaul_received_power: distance must be positive");
    const double wave = kSpeedOfLight / (4.0 * kPi * d * cfg.f_c_mmwave_hz);
    return cfg.p_mmwave_mw * cfg.g_tx * cfg.g_rx * wave * wave;
}

double backhaul_capacity(double d, double b_alloc, const RadioConfig& cfg) {
    if (!(b_alloc > 0.0)) throw Error("backhaul_capacity: allocation must be positive");
    const double snr = backhaul_received_power(d, cfg) / (b_alloc * cfg.n0_mw_hz);
    if (cfg.mmwave_sinr_gate && snr <= cfg.sinr_threshold_mmwave) return 0.0;
    return shannon_rate(snr, b_alloc);
}

double uav_ue_rate(double sinr, double b_alloc, const RadioConfig& cfg) {
    return sinr > cfg.sinr_threshold ? shannon_rate(sinr, b_alloc) : 0.0;
}

double gbs_ue_rate(double sinr, double b_alloc, const RadioConfig& cfg) {
    if (cfg.gbs_outage_mode) {
        if (!(sinr > 0.0)) return 0.0;
        return std::exp(-cfg.sinr_threshold / sinr) * shannon_rate(sinr, b_alloc);
    }
    return sinr > cfg.sinr_threshold ? shannon_rate(sinr, b_alloc) : 0.0;
}

double required_power(double c_target, double b_alloc, double path_loss_db,
                      double interference_mw, const RadioConfig& cfg) {
    if (!(b_alloc > 0.0)) throw Error("required_power: allocation must be positive");
    if (c_target < 0.0) throw Error("required_power: negative target rate");
    if (interference_mw < 0.0) throw Error("required_power: negative interference");
    const double sinr_needed = std::exp2(c_target / b_alloc) - 1.0;
    return db_to_linear(path_loss_db) * (interference_mw + b_alloc * cfg.n0_mw_hz) * sinr_needed;
}

}  // namespace uavplace::channel
