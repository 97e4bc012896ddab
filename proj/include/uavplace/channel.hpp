#pragma once

#include <cmath>

namespace uavplace::channel {

// Internal units are linear throughout: mW, Hz, bps, m. Decibel values appear
// only at config parse and report boundaries.

inline constexpr double kSpeedOfLight = 3.0e8;  // m/s

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

// Sigmoid parameters of the air-to-ground LoS model plus the excess losses
// stacked on free space for each propagation state.
struct EnvironmentParams {
    double a = 9.61;           // sigmoid midpoint (deg)
    double b = 0.16;           // sigmoid slope (1/deg)
    double eta_los_db = 1.0;   // LoS excess loss (dB)
    double eta_nlos_db = 20.0; // NLoS excess loss (dB)

    static EnvironmentParams urban() { return {}; }
    void validate() const;
};

struct RadioConfig {
    double p_g_mw = 1.0e4;                    // GBS transmit power, 40 dBm
    double p_uav_mw = 100.0;                  // UAV transmit power budget, 20 dBm
    double p_mmwave_mw = 1000.0;              // mmWave backhaul transmit power, 30 dBm
    double g_tx = 1.0;                        // backhaul antenna gains (linear)
    double g_rx = 1.0;
    double alpha = 6.5;                       // terrestrial path-loss exponent
    double f_c_hz = 2.0e9;                    // access carrier
    double f_c_mmwave_hz = 28.0e9;            // backhaul carrier
    double bandwidth_hz = 20.0e6;             // access bandwidth per cell
    double bandwidth_mmwave_total_hz = 2.0e9; // backhaul pool shared by the fleet
    double n0_mw_hz = 3.9810717055349565e-18; // noise density, -174 dBm/Hz
    double sinr_threshold = 3.1622776601683795;        // 5 dB
    double sinr_threshold_mmwave = 1000.0;             // 30 dB
    double c_min_bps = 1.0e6;                 // guaranteed per-UE rate
    double h_min_m = 20.0;
    double h_max_m = 400.0;
    double l_max_db = 119.0;                  // tolerated air-to-ground path loss
    int k_max = 100;                          // fleet size bound
    bool mmwave_sinr_gate = false;            // zero backhaul capacity below the mmWave threshold
    bool gbs_outage_mode = false;             // Rayleigh outage factor on GBS rates
    double c_hat_g_override_bps = 0.0;        // >0 replaces the derived GBS capacity

    static RadioConfig table_defaults() { return {}; }
    void validate() const;
};

// One evaluated downlink, reported at the dB boundary where conventional.
struct LinkBudget {
    double path_loss_db = 0.0;
    double received_power_mw = 0.0;
    double sinr = 0.0;      // linear ratio
    double rate_bps = 0.0;
};

// Probability of a line-of-sight air-to-ground link at altitude h over
// horizontal range r. r = 0 is the overhead limit (elevation 90 deg).
double los_probability(double h, double r, const EnvironmentParams& env);

// Probability-weighted air-to-ground path loss (dB) over the slant distance.
// Throws AltitudeBoundError when h is outside [h_min, h_max].
double atg_path_loss(double h, double r, const RadioConfig& cfg, const EnvironmentParams& env);

// Largest horizontal range whose loss stays within l_max at altitude h,
// resolved by bisection to 0.01 m. Returns 0 when even the overhead link
// exceeds l_max.
double max_radius_for_altitude(double h, const RadioConfig& cfg, const EnvironmentParams& env);

// Altitude in [h_min, h_max] minimizing the coverage-edge loss at range r,
// found by golden-section search to 0.1 m. Throws InfeasibleRadiusError when
// the best edge loss still exceeds l_max.
double altitude_for_radius(double r, const RadioConfig& cfg, const EnvironmentParams& env);

// Friis received power of the GBS-UAV backhaul at 3D separation d.
double backhaul_received_power(double d, const RadioConfig& cfg);

// Shannon capacity of a backhaul allocation. With cfg.mmwave_sinr_gate the
// link is declared invalid (capacity 0) below sinr_threshold_mmwave.
double backhaul_capacity(double d, double b_alloc, const RadioConfig& cfg);

inline double shannon_rate(double sinr, double b) { return b * std::log2(1.0 + sinr); }

// Access rates gate on the SINR threshold: links at or below it carry nothing.
double uav_ue_rate(double sinr, double b_alloc, const RadioConfig& cfg);

// GBS rate; in gbs_outage_mode the indicator becomes the Rayleigh success
// probability exp(-threshold/sinr) evaluated at the mean SINR.
double gbs_ue_rate(double sinr, double b_alloc, const RadioConfig& cfg);

// Transmit power needed for a target rate over bandwidth b_alloc against the
// given path loss and interference. Feeding the result back through the SINR
// and rate formulas recovers c_target.
double required_power(double c_target, double b_alloc, double path_loss_db,
                      double interference_mw, const RadioConfig& cfg);

}  // namespace uavplace::channel
