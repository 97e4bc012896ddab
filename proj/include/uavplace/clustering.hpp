#pragma once

#include <cstdint>
#include <vector>

#include "uavplace/geometry.hpp"

namespace uavplace::clustering {

struct ClusteringResult {
    std::vector<int> labels;          // one entry per point, in [0, k)
    std::vector<Point2> centroids;    // cluster means of the final labeling
    double objective = 0.0;           // total point-to-centroid distance
    std::vector<double> objective_trace;  // per-iteration assignment objective
    int iterations = 0;
};

// Exact minimum-cost balanced assignment of n points to k clusters given a
// dense n-by-k distance matrix. Cluster sizes come out as floor(n/k) or
// ceil(n/k), with the split chosen by the optimization. Ties break toward
// the lowest point index, then the lowest cluster index.
std::vector<int> balanced_assignment(const Eigen::MatrixXd& cost);

// Balanced k-means: alternates the exact balanced assignment with mean
// centroid updates, seeded k-means++ style. Stops when labels stabilize,
// the objective would increase, or max_iters runs out.
ClusteringResult balanced_kmeans(const PointList& points, int k, std::uint64_t seed,
                                 int max_iters = 100);

// Exhaustive capacitated-clustering reference for oracle-scale instances
// (n <= 12): minimizes total distance to cluster means subject to per-cluster
// rate capacity, requiring all k clusters non-empty. Throws InfeasibleError
// when no assignment fits the capacities.
ClusteringResult ccp_exact(const PointList& points, int k,
                           const std::vector<double>& capacities,
                           const std::vector<double>& rates);

}  // namespace uavplace::clustering
