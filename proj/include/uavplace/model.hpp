#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavplace/channel.hpp"
#include "uavplace/geometry.hpp"

namespace uavplace {

// Association sentinel values for Association::serving; UAVs are 1-based so
// the serving column reads 0 = GBS, j = fleet[j-1], -1 = unserved.
inline constexpr int kServeUnserved = -1;
inline constexpr int kServeGbs = 0;

struct UavPlacement {
    Point2 center{0.0, 0.0};        // projected hover position (m)
    double altitude_m = 0.0;
    double radius_m = 0.0;          // coverage disc radius (m)
    double backhaul_alloc_hz = 0.0; // share of the mmWave pool

    geometry::Circle disc() const { return {center, radius_m}; }
};

// Per-UE link state, one entry per UE. rate_bps is the allocated downlink
// rate (bounded by Shannon), power_mw the UAV transmit power spent on the UE
// (0 for GBS-served UEs, whose power is the shared broadcast budget).
struct Association {
    Eigen::VectorXi serving;
    Eigen::VectorXd sinr;
    Eigen::VectorXd bandwidth_hz;
    Eigen::VectorXd rate_bps;
    Eigen::VectorXd power_mw;

    void resize(Eigen::Index n) {
        serving = Eigen::VectorXi::Constant(n, kServeUnserved);
        sinr = Eigen::VectorXd::Zero(n);
        bandwidth_hz = Eigen::VectorXd::Zero(n);
        rate_bps = Eigen::VectorXd::Zero(n);
        power_mw = Eigen::VectorXd::Zero(n);
    }
    Eigen::Index size() const { return serving.size(); }
};

struct Area {
    double width_m = 1200.0;
    double height_m = 1200.0;
};

struct Scenario {
    PointList ue;                   // one UE per row, inside the area
    Point2 gbs{600.0, 600.0};
    Area area;
    channel::RadioConfig radio;
    channel::EnvironmentParams env;
    std::uint64_t seed = 0;

    Eigen::Index n_ues() const { return ue.rows(); }
    void validate() const;
};

struct CrowdHotspot {
    Point2 center{0.0, 0.0};
    double std_dev_m = 0.0;
    int count = 0;
};

struct CrowdSpec {
    std::vector<CrowdHotspot> hotspots;
    int background_count = 0;       // uniform over the area
    Area area;

    int total() const;
    void validate() const;
};

struct Constraint {
    std::string id;        // C1..C6
    bool satisfied = true;
    double margin = 0.0;   // native units; satisfied iff margin >= 0
    std::string detail;
};

struct ConstraintReport {
    std::vector<Constraint> constraints;  // always C1..C6 in order

    bool all_satisfied() const {
        for (const auto& c : constraints)
            if (!c.satisfied) return false;
        return true;
    }
};

struct TraceEntry {
    int k = 0;
    int inner_iterations = 0;
    int unserved = 0;
    double sumrate_bps = 0.0;
    bool constraints_ok = false;
    std::string note;
};

enum class PlaceStatus { ok, fleet_exhausted };

struct PlacementResult {
    PlaceStatus status = PlaceStatus::ok;
    int k = 0;
    std::vector<UavPlacement> fleet;
    Association assoc;
    double sumrate_bps = 0.0;
    ConstraintReport report;
    std::vector<TraceEntry> trace;
    int unserved = 0;
};

}  // namespace uavplace
