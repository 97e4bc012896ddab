#include "uavplace/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uavplace/errors.hpp"
#include "uavplace/random.hpp"

namespace uavplace::clustering {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Point2> cluster_means(const PointList& pts, const std::vector<int>& labels, int k) {
    std::vector<Point2> mean(static_cast<std::size_t>(k), Point2::Zero());
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        mean[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] += pts.row(i).transpose();
        ++count[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) {
        if (count[static_cast<std::size_t>(c)] == 0)
            throw EmptyClusterError("cluster " + std::to_string(c) + " is empty");
        mean[static_cast<std::size_t>(c)] /= count[static_cast<std::size_t>(c)];
    }
    return mean;
}

double labeling_cost(const PointList& pts, const std::vector<int>& labels,
                     const std::vector<Point2>& centroids) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
        sum += (pts.row(i).transpose() - centroids[static_cast<std::size_t>(
                   labels[static_cast<std::size_t>(i)])]).norm();
    return sum;
}

// Seeded k-means++: distance-squared sampling over the current seed set.
std::vector<Point2> seed_centroids(const PointList& pts, int k, Rng& rng) {
    const Eigen::Index n = pts.rows();
    std::vector<Point2> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    centroids.push_back(pts.row(rng.uniform_int(static_cast<int>(n))));

    Eigen::VectorXd d2 =
        (pts.rowwise() - centroids[0].transpose()).rowwise().squaredNorm();
    while (static_cast<int>(centroids.size()) < k) {
        const double total = d2.sum();
        Eigen::Index pick = 0;
        if (total > 0.0) {
            double x = rng.uniform() * total;
            for (Eigen::Index i = 0; i < n; ++i) {
                x -= d2(i);
                if (x <= 0.0) {
                    pick = i;
                    break;
                }
                pick = i;
            }
        } else {
            // All mass at chosen seeds (duplicate-heavy input): cycle indices.
            pick = static_cast<Eigen::Index>(centroids.size()) % n;
        }
        centroids.push_back(pts.row(pick));
        d2 = d2.cwiseMin(
            (pts.rowwise() - centroids.back().transpose()).rowwise().squaredNorm());
    }
    return centroids;
}

}  // namespace

// Successive-shortest-path transportation solve, one point inserted at a
// time with Dijkstra over clusters. Every cluster holds floor(n/k) points
// plus possibly one of the n mod k floating extra slots. A full cluster
// extends the path two ways: evict one of its members toward another
// cluster, or take over an extra slot currently parked at another cluster;
// both are residual arcs of the underlying flow network, so the insertion
// stays exactly optimal.
std::vector<int> balanced_assignment(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    const int k = static_cast<int>(cost.cols());
    if (n < 1 || k < 1) throw InvalidKError("balanced_assignment: empty problem");

    const int base = n / k;
    const int extras = n % k;
    int pool_used = 0;

    std::vector<int> assign(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
    std::vector<char> pool_user(static_cast<std::size_t>(k), 0);  // holds an extra slot
    std::vector<double> v(static_cast<std::size_t>(k), 0.0);      // cluster potentials

    std::vector<double> dist(static_cast<std::size_t>(k));
    std::vector<int> parent_q(static_cast<std::size_t>(k));  // evicted point, -1 = slot transfer
    std::vector<int> parent_j(static_cast<std::size_t>(k));
    std::vector<char> done(static_cast<std::size_t>(k));

    auto slack = [&](int j) {
        return static_cast<int>(members[static_cast<std::size_t>(j)].size()) <
               base + pool_user[static_cast<std::size_t>(j)];
    };
    auto can_pool = [&](int j) {
        return !pool_user[static_cast<std::size_t>(j)] && pool_used < extras;
    };

    for (int p = 0; p < n; ++p) {
        for (int j = 0; j < k; ++j) {
            dist[static_cast<std::size_t>(j)] = cost(p, j) - v[static_cast<std::size_t>(j)];
            parent_q[static_cast<std::size_t>(j)] = -1;
            parent_j[static_cast<std::size_t>(j)] = -1;
            done[static_cast<std::size_t>(j)] = false;
        }

        int target = -1;
        char target_pool = 0;
        double d_sink = kInf;
        while (true) {
            int jmin = -1;
            for (int j = 0; j < k; ++j)
                if (!done[static_cast<std::size_t>(j)] &&
                    (jmin < 0 || dist[static_cast<std::size_t>(j)] < dist[static_cast<std::size_t>(jmin)]))
                    jmin = j;
            // Clusters still open cannot beat the sink: absorbing costs each
            // cluster its own potential on top of dist, never less than zero.
            if (jmin < 0 || dist[static_cast<std::size_t>(jmin)] >= d_sink) break;
            done[static_cast<std::size_t>(jmin)] = true;
            if (slack(jmin) || can_pool(jmin)) {
                const double cand =
                    dist[static_cast<std::size_t>(jmin)] + v[static_cast<std::size_t>(jmin)];
                if (cand < d_sink) {
                    d_sink = cand;
                    target = jmin;
                    target_pool = slack(jmin) ? 0 : 1;
                }
            }
            // Moving member q toward a new home costs its reduced-cost gap;
            // clusters with room relax too, a path may pass through them.
            // The max() only absorbs rounding noise.
            for (int q : members[static_cast<std::size_t>(jmin)]) {
                const double rebase =
                    dist[static_cast<std::size_t>(jmin)] - (cost(q, jmin) - v[static_cast<std::size_t>(jmin)]);
                for (int j = 0; j < k; ++j) {
                    if (done[static_cast<std::size_t>(j)]) continue;
                    const double nd =
                        std::max(rebase + cost(q, j) - v[static_cast<std::size_t>(j)],
                                 dist[static_cast<std::size_t>(jmin)]);
                    if (nd < dist[static_cast<std::size_t>(j)]) {
                        dist[static_cast<std::size_t>(j)] = nd;
                        parent_q[static_cast<std::size_t>(j)] = q;
                        parent_j[static_cast<std::size_t>(j)] = jmin;
                    }
                }
            }
            // Taking over another cluster's extra slot costs the potential
            // gap alone; the deficit continues from the old holder.
            if (!pool_user[static_cast<std::size_t>(jmin)]) {
                for (int j = 0; j < k; ++j) {
                    if (done[static_cast<std::size_t>(j)] || !pool_user[static_cast<std::size_t>(j)])
                        continue;
                    const double nd = std::max(
                        dist[static_cast<std::size_t>(jmin)] + v[static_cast<std::size_t>(jmin)] -
                            v[static_cast<std::size_t>(j)],
                        dist[static_cast<std::size_t>(jmin)]);
                    if (nd < dist[static_cast<std::size_t>(j)]) {
                        dist[static_cast<std::size_t>(j)] = nd;
                        parent_q[static_cast<std::size_t>(j)] = -1;
                        parent_j[static_cast<std::size_t>(j)] = jmin;
                    }
                }
            }
        }

        const double delta = d_sink;
        for (int j = 0; j < k; ++j)
            if (done[static_cast<std::size_t>(j)])
                v[static_cast<std::size_t>(j)] +=
                    std::min(dist[static_cast<std::size_t>(j)], delta) - delta;

        if (target_pool) {
            pool_user[static_cast<std::size_t>(target)] = 1;
            ++pool_used;
        }

        int j = target;
        while (parent_j[static_cast<std::size_t>(j)] != -1) {
            const int q = parent_q[static_cast<std::size_t>(j)];
            const int jp = parent_j[static_cast<std::size_t>(j)];
            if (q >= 0) {  // eviction: q moves jp -> j
                auto& src = members[static_cast<std::size_t>(jp)];
                src.erase(std::find(src.begin(), src.end(), q));
                members[static_cast<std::size_t>(j)].push_back(q);
                assign[static_cast<std::size_t>(q)] = j;
            } else {  // slot transfer: jp claims j's extra slot
                pool_user[static_cast<std::size_t>(jp)] = 1;
                pool_user[static_cast<std::size_t>(j)] = 0;
            }
            j = jp;
        }
        members[static_cast<std::size_t>(j)].push_back(p);
        assign[static_cast<std::size_t>(p)] = j;
    }
    return assign;
}

ClusteringResult balanced_kmeans(const PointList& points, int k, std::uint64_t seed,
                                 int max_iters) {
    const Eigen::Index n = points.rows();
    if (n < 1) throw InvalidKError("balanced_kmeans: no points");
    if (k < 1 || k > static_cast<int>(n))
        throw InvalidKError("balanced_kmeans: k=" + std::to_string(k) + " with n=" +
                            std::to_string(n));
    if (max_iters < 1) throw InvalidKError("balanced_kmeans: max_iters must be >= 1");

    Rng rng(seed);
    std::vector<Point2> centroids = seed_centroids(points, k, rng);

    ClusteringResult out;
    std::vector<int> prev_labels;
    double prev_obj = kInf;
    Eigen::MatrixXd cost(n, k);

    for (int iter = 0; iter < max_iters; ++iter) {
        for (int j = 0; j < k; ++j)
            cost.col(j) =
                (points.rowwise() - centroids[static_cast<std::size_t>(j)].transpose()).rowwise().norm();

        std::vector<int> labels = balanced_assignment(cost);
        double obj = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            obj += cost(i, labels[static_cast<std::size_t>(i)]);

        // Mean updates optimize squared distance, so the plain-distance
        // objective could tick up; stop at the previous state instead.
        if (obj > prev_obj + 1e-9 * std::max(1.0, prev_obj)) {
            centroids = cluster_means(points, prev_labels, k);
            break;
        }

        out.objective_trace.push_back(obj);
        ++out.iterations;
        if (labels == prev_labels) break;
        prev_labels = std::move(labels);
        prev_obj = obj;
        centroids = cluster_means(points, prev_labels, k);
    }

    out.labels = std::move(prev_labels);
    out.centroids = std::move(centroids);
    out.objective = labeling_cost(points, out.labels, out.centroids);
    return out;
}

namespace {

struct CcpSearch {
    const PointList& pts;
    int n;
    int k;
    const std::vector<double>& caps;
    const std::vector<double>& rates;
    std::vector<int> labels;
    std::vector<double> load;
    std::vector<int> count;
    std::vector<int> best_labels;
    double best_cost = kInf;

    void recurse(int i, int used) {
        if (i == n) {
            if (used != k) return;
            std::vector<Point2> mean = cluster_means(pts, labels, k);
            const double c = labeling_cost(pts, labels, mean);
            if (c < best_cost) {
                best_cost = c;
                best_labels = labels;
            }
            return;
        }
        if (n - i < k - used) return;  // not enough points left to open all clusters
        // Capacities are per cluster index, so every index is a distinct choice.
        for (int c = 0; c < k; ++c) {
            if (load[static_cast<std::size_t>(c)] + rates[static_cast<std::size_t>(i)] >
                caps[static_cast<std::size_t>(c)] + 1e-9)
                continue;
            labels[static_cast<std::size_t>(i)] = c;
            load[static_cast<std::size_t>(c)] += rates[static_cast<std::size_t>(i)];
            ++count[static_cast<std::size_t>(c)];
            recurse(i + 1, used + (count[static_cast<std::size_t>(c)] == 1 ? 1 : 0));
            --count[static_cast<std::size_t>(c)];
            load[static_cast<std::size_t>(c)] -= rates[static_cast<std::size_t>(i)];
        }
    }
};

}  // namespace

ClusteringResult ccp_exact(const PointList& points, int k,
                           const std::vector<double>& capacities,
                           const std::vector<double>& rates) {
    const int n = static_cast<int>(points.rows());
    if (n < 1 || n > 12)
        throw InvalidKError("ccp_exact: oracle handles 1..12 points, got " + std::to_string(n));
    if (k < 1 || k > n) throw InvalidKError("ccp_exact: k out of range");
    if (static_cast<int>(capacities.size()) != k || static_cast<int>(rates.size()) != n)
        throw InvalidKError("ccp_exact: capacities/rates sized wrong");

    CcpSearch search{points, n, k, capacities, rates,
                     std::vector<int>(static_cast<std::size_t>(n), -1),
                     std::vector<double>(static_cast<std::size_t>(k), 0.0),
                     std::vector<int>(static_cast<std::size_t>(k), 0),
                     {},
                     kInf};
    search.recurse(0, 0);
    if (search.best_labels.empty())
        throw InfeasibleError("ccp_exact: no assignment satisfies the capacities");

    ClusteringResult out;
    out.labels = search.best_labels;
    out.centroids = cluster_means(points, out.labels, k);
    out.objective = search.best_cost;
    out.objective_trace = {search.best_cost};
    out.iterations = 1;
    return out;
}

}  // namespace uavplace::clustering
