#include "uavplace/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "uavplace/clustering.hpp"
#include "uavplace/errors.hpp"
#include "uavplace/evaluation.hpp"
#include "uavplace/link.hpp"

namespace uavplace::placement {

namespace {

constexpr int kInnerCap = 50;          // geometry/association iterations per k
constexpr double kCenterTol = 0.01;    // m; hover positions considered settled

double target_rate(double b_alloc, const channel::RadioConfig& cfg) {
    return std::max(cfg.c_min_bps * kRateMargin,
                    channel::shannon_rate(cfg.sinr_threshold * kSinrMargin, b_alloc));
}

std::vector<int> server_counts(const Association& assoc, std::size_t k) {
    std::vector<int> count(k + 1, 0);
    for (Eigen::Index i = 0; i < assoc.size(); ++i)
        if (assoc.serving(i) >= 0) ++count[static_cast<std::size_t>(assoc.serving(i))];
    return count;
}

}  // namespace

Association initial_gbs_association(const Scenario& s) {
    const auto& cfg = s.radio;
    const Eigen::Index n = s.n_ues();
    Association assoc;
    assoc.resize(n);

    // Bootstrap SINR: terrestrial leg over the full band, empty sky.
    Eigen::VectorXd boot(n);
    for (Eigen::Index i = 0; i < n; ++i)
        boot(i) = channel::gbs_interference_at(s.ue.row(i), s.gbs, cfg) /
                  (cfg.bandwidth_hz * cfg.n0_mw_hz);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return boot(a) > boot(b); });

    const int cap = evaluation::gbs_user_cap(cfg);
    int admitted = 0;
    for (Eigen::Index i : order) {
        if (admitted >= cap || boot(i) <= cfg.sinr_threshold) break;
        assoc.serving(i) = kServeGbs;
        ++admitted;
    }
    return assoc;
}

int fleet_size_lower_bound(Eigen::Index n_users, double c_min_bps, double c_hat_bps) {
    if (n_users <= 0) return 0;
    const double demand = static_cast<double>(n_users) * c_min_bps;
    return std::max(1, static_cast<int>(std::ceil(demand / c_hat_bps)));
}

int initial_k(const Scenario& s, Eigen::Index n_uav_users) {
    if (n_uav_users == 0) return 0;
    const auto& cfg = s.radio;
    const double access_cap = channel::shannon_rate(cfg.sinr_threshold, cfg.bandwidth_hz);

    // Worst-case fronthaul geometry: a UAV across the full area diagonal
    // from the GBS, hovering at the altitude ceiling.
    const double d_worst = std::sqrt(s.area.width_m * s.area.width_m +
                                     s.area.height_m * s.area.height_m +
                                     cfg.h_max_m * cfg.h_max_m);

    int k = 1;
    for (int pass = 0; pass < 2; ++pass) {
        const double share = cfg.bandwidth_mmwave_total_hz / k;
        const double per_uav = std::min(access_cap, channel::backhaul_capacity(d_worst, share, cfg));
        if (per_uav <= 0.0)
            throw FleetExhaustedError("initial_k: backhaul carries no rate across the area diagonal");
        k = std::max(k, fleet_size_lower_bound(n_uav_users, cfg.c_min_bps, per_uav));
    }
    if (k > cfg.k_max)
        throw FleetExhaustedError("initial_k: demand needs " + std::to_string(k) +
                                  " UAVs, bound is " + std::to_string(cfg.k_max));
    return k;
}

void refine_placements(const Scenario& s, const Association& assoc,
                       std::vector<UavPlacement>& fleet) {
    const int k = static_cast<int>(fleet.size());
    for (int j = 0; j < k; ++j) {
        std::vector<Point2> members;
        for (Eigen::Index i = 0; i < assoc.size(); ++i)
            if (assoc.serving(i) == j + 1) members.push_back(s.ue.row(i));
        if (members.empty()) continue;
        const geometry::Circle mec = geometry::min_covering_circle(members, s.seed);
        fleet[static_cast<std::size_t>(j)].center = mec.center;
        fleet[static_cast<std::size_t>(j)].radius_m = std::max(mec.radius, 1.0);
        fleet[static_cast<std::size_t>(j)].altitude_m =
            channel::altitude_for_radius(fleet[static_cast<std::size_t>(j)].radius_m, s.radio, s.env);
    }
    for (auto& u : fleet) u.backhaul_alloc_hz = s.radio.bandwidth_mmwave_total_hz / k;
}

void sweep_powers(const Scenario& s, const std::vector<UavPlacement>& fleet, Association& assoc) {
    const auto& cfg = s.radio;
    const auto count = server_counts(assoc, fleet.size());
    // Snapshot the fleet's interfering power before touching anything so the
    // whole step reads one consistent state.
    const auto eff = channel::uav_effective_powers(fleet, assoc, cfg);

    for (Eigen::Index i = 0; i < assoc.size(); ++i) {
        const int sv = assoc.serving(i);
        if (sv < 1) continue;
        const auto& u = fleet[static_cast<std::size_t>(sv - 1)];
        const Point2 pos = s.ue.row(i);
        const double b = cfg.bandwidth_hz / count[static_cast<std::size_t>(sv)];
        const double loss = channel::atg_path_loss(u.altitude_m, (pos - u.center).norm(), cfg, s.env);
        const double interference =
            channel::gbs_interference_at(pos, s.gbs, cfg) +
            channel::uav_interference_at(pos, sv - 1, fleet, eff, cfg, s.env);
        assoc.power_mw(i) = channel::required_power(target_rate(b, cfg), b, loss, interference, cfg);
        assoc.bandwidth_hz(i) = b;
    }
}

bool reassociate(const Scenario& s, const std::vector<UavPlacement>& fleet, Association& assoc) {
    const auto& cfg = s.radio;
    if (fleet.empty()) return false;
    auto count = server_counts(assoc, fleet.size());
    const auto eff = channel::uav_effective_powers(fleet, assoc, cfg);
    bool changed = false;

    std::vector<int> cand(fleet.size());
    for (Eigen::Index i = 0; i < assoc.size(); ++i) {
        const int sv = assoc.serving(i);
        if (sv != kServeUnserved && assoc.sinr(i) > cfg.sinr_threshold) continue;

        // Candidates: every UAV except the failing server, nearest first.
        const Point2 pos = s.ue.row(i);
        cand.clear();
        for (std::size_t j = 0; j < fleet.size(); ++j)
            if (static_cast<int>(j) + 1 != sv) cand.push_back(static_cast<int>(j));
        std::sort(cand.begin(), cand.end(), [&](int a, int b) {
            return (pos - fleet[static_cast<std::size_t>(a)].center).norm() <
                   (pos - fleet[static_cast<std::size_t>(b)].center).norm();
        });

        int won = -1;
        double won_b = 0.0, won_p = 0.0;
        for (int j : cand) {
            const auto& u = fleet[static_cast<std::size_t>(j)];
            const double b = cfg.bandwidth_hz / (count[static_cast<std::size_t>(j) + 1] + 1);
            const double loss =
                channel::atg_path_loss(u.altitude_m, (pos - u.center).norm(), cfg, s.env);
            const double interference =
                channel::gbs_interference_at(pos, s.gbs, cfg) +
                channel::uav_interference_at(pos, j, fleet, eff, cfg, s.env);
            const double p =
                channel::required_power(target_rate(b, cfg), b, loss, interference, cfg);
            if (channel::uav_ue_sinr(p, loss, interference, b, cfg) > cfg.sinr_threshold) {
                won = j;
                won_b = b;
                won_p = p;
                break;
            }
        }

        if (won >= 0) {
            if (sv >= 0) --count[static_cast<std::size_t>(sv)];
            ++count[static_cast<std::size_t>(won) + 1];
            assoc.serving(i) = won + 1;
            assoc.bandwidth_hz(i) = won_b;
            assoc.power_mw(i) = won_p;
            changed = true;
        } else if (sv != kServeUnserved) {
            --count[static_cast<std::size_t>(sv)];
            assoc.serving(i) = kServeUnserved;
            assoc.power_mw(i) = 0.0;
            changed = true;
        }
    }
    return changed;
}

namespace {

struct Attempt {
    std::vector<UavPlacement> fleet;
    Association assoc;
    ConstraintReport report;
    double sumrate = 0.0;
    int k = 0;
    int inner = 0;
    int unserved = 0;
};

int count_unserved(const Association& assoc) {
    int u = 0;
    for (Eigen::Index i = 0; i < assoc.size(); ++i)
        if (assoc.serving(i) == kServeUnserved) ++u;
    return u;
}

// Run the refine/power/reassociate loop for a fixed fleet size.
Attempt attempt_k(const Scenario& s, const Association& seed_assoc,
                  const std::vector<Eigen::Index>& uav_ues, int k) {
    Attempt at;
    at.k = k;
    at.assoc = seed_assoc;

    PointList pts(static_cast<Eigen::Index>(uav_ues.size()), 2);
    for (std::size_t t = 0; t < uav_ues.size(); ++t) pts.row(static_cast<Eigen::Index>(t)) = s.ue.row(uav_ues[t]);
    const auto km = clustering::balanced_kmeans(pts, k, s.seed);
    for (std::size_t t = 0; t < uav_ues.size(); ++t)
        at.assoc.serving(uav_ues[t]) = km.labels[t] + 1;

    at.fleet.assign(static_cast<std::size_t>(k), UavPlacement{});
    std::vector<Point2> prev_centers;

    for (int inner = 1; inner <= kInnerCap; ++inner) {
        at.inner = inner;
        refine_placements(s, at.assoc, at.fleet);
        sweep_powers(s, at.fleet, at.assoc);
        evaluation::recompute(s, at.fleet, at.assoc);
        const bool changed = reassociate(s, at.fleet, at.assoc);

        double moved = std::numeric_limits<double>::infinity();
        if (!prev_centers.empty()) {
            moved = 0.0;
            for (std::size_t j = 0; j < at.fleet.size(); ++j)
                moved = std::max(moved, (at.fleet[j].center - prev_centers[j]).norm());
        }
        prev_centers.resize(at.fleet.size());
        for (std::size_t j = 0; j < at.fleet.size(); ++j) prev_centers[j] = at.fleet[j].center;

        if (!changed && moved < kCenterTol) break;
    }

    // The loop may stop with labels fresher than the link fields.
    evaluation::recompute(s, at.fleet, at.assoc);
    at.report = evaluation::check_constraints(s, at.fleet, at.assoc);
    at.sumrate = evaluation::sumrate(at.assoc);
    at.unserved = count_unserved(at.assoc);
    return at;
}

void fill_result(PlacementResult& out, Attempt&& at) {
    out.k = at.k;
    out.fleet = std::move(at.fleet);
    out.assoc = std::move(at.assoc);
    out.report = std::move(at.report);
    out.sumrate_bps = at.sumrate;
    out.unserved = at.unserved;
}

}  // namespace

PlacementResult place(const Scenario& s) {
    s.validate();
    PlacementResult out;
    Association seed_assoc = initial_gbs_association(s);

    std::vector<Eigen::Index> uav_ues;
    for (Eigen::Index i = 0; i < seed_assoc.size(); ++i)
        if (seed_assoc.serving(i) == kServeUnserved) uav_ues.push_back(i);

    if (uav_ues.empty()) {
        Attempt at;
        at.assoc = std::move(seed_assoc);
        evaluation::recompute(s, at.fleet, at.assoc);
        at.report = evaluation::check_constraints(s, at.fleet, at.assoc);
        at.sumrate = evaluation::sumrate(at.assoc);
        at.unserved = count_unserved(at.assoc);
        out.trace.push_back({0, 0, at.unserved, at.sumrate, at.report.all_satisfied(), ""});
        fill_result(out, std::move(at));
        out.status = PlaceStatus::ok;
        return out;
    }

    const int k_hi = static_cast<int>(std::min<Eigen::Index>(
        uav_ues.size(), static_cast<Eigen::Index>(s.radio.k_max)));
    int k = std::min(initial_k(s, static_cast<Eigen::Index>(uav_ues.size())), k_hi);

    bool have_best = false;
    Attempt best;
    for (; k <= k_hi; ++k) {
        TraceEntry entry{k, 0, 0, 0.0, false, ""};
        try {
            Attempt at = attempt_k(s, seed_assoc, uav_ues, k);
            entry.inner_iterations = at.inner;
            entry.unserved = at.unserved;
            entry.sumrate_bps = at.sumrate;
            entry.constraints_ok = at.report.all_satisfied();
            const bool valid = entry.constraints_ok && at.unserved == 0;
            const bool better = !have_best || at.unserved < best.unserved ||
                                (at.unserved == best.unserved && at.sumrate > best.sumrate);
            if (better) {
                best = at;
                have_best = true;
            }
            out.trace.push_back(entry);
            if (valid) {
                fill_result(out, std::move(at));
                out.status = PlaceStatus::ok;
                return out;
            }
        } catch (const InfeasibleRadiusError& e) {
            entry.note = e.what();
            out.trace.push_back(entry);
        }
    }

    if (!have_best)
        throw FleetExhaustedError("place: no fleet size up to " + std::to_string(k_hi) +
                                  " produced a placement");
    fill_result(out, std::move(best));
    out.status = PlaceStatus::fleet_exhausted;
    return out;
}

PlacementResult place_gbs_only(const Scenario& s) {
    s.validate();
    PlacementResult out;
    Attempt at;
    at.assoc = initial_gbs_association(s);
    evaluation::recompute(s, at.fleet, at.assoc);
    at.report = evaluation::check_constraints(s, at.fleet, at.assoc);
    at.sumrate = evaluation::sumrate(at.assoc);
    at.unserved = count_unserved(at.assoc);
    out.trace.push_back({0, 0, at.unserved, at.sumrate, at.report.all_satisfied(), "gbs-only"});
    fill_result(out, std::move(at));
    out.status = PlaceStatus::ok;
    return out;
}

}  // namespace uavplace::placement
