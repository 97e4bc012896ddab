#pragma once

#include <stdexcept>
#include <string>

namespace uavplace {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Degenerate geometric input (non-positive altitude or distance).
struct InvalidGeometryError : Error {
    using Error::Error;
};

// Altitude argument outside the configured [h_min, h_max] box.
struct AltitudeBoundError : Error {
    using Error::Error;
};

// No altitude in [h_min, h_max] keeps the cluster edge loss within l_max;
// the caller must split the cluster (grow k).
struct InfeasibleRadiusError : Error {
    using Error::Error;
};

struct EmptyClusterError : Error {
    using Error::Error;
};

struct InvalidKError : Error {
    using Error::Error;
};

// Exhaustive capacitated-clustering oracle: no feasible assignment exists.
struct InfeasibleError : Error {
    using Error::Error;
};

// The fleet bound k_max cannot accommodate the demand.
struct FleetExhaustedError : Error {
    using Error::Error;
};

// Malformed configuration, dataset, or result file.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace uavplace
