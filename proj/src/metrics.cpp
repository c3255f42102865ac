#include "recmarket/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace recmarket {

namespace {

std::vector<double> sorted_ascending_checked(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("empty vector");
    double total = 0.0;
    for (double v : values) {
        if (v < 0.0) throw std::invalid_argument("negative value");
        total += v;
    }
    if (total <= 0.0) throw std::invalid_argument("all-zero vector");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

}  // namespace

std::vector<LorenzPoint> lorenz_curve(const std::vector<double>& values) {
    std::vector<double> sorted = sorted_ascending_checked(values);
    double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    std::size_t n = sorted.size();
    std::vector<LorenzPoint> pts;
    pts.reserve(n + 1);
    pts.push_back({0.0, 0.0});
    double cum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cum += sorted[i];
        pts.push_back({double(i + 1) / double(n), cum / total});
    }
    return pts;
}

double gini(const std::vector<double>& values) {
    std::vector<double> sorted = sorted_ascending_checked(values);
    std::size_t n = sorted.size();
    double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i) acc += (2.0 * double(i) - double(n) - 1.0) * sorted[i - 1];
    return acc / (double(n) * total);
}

double InequalityReport::top_share(double q) const {
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("q must be in (0,1]");
    std::size_t count = std::size_t(std::ceil(q * double(sorted_desc_.size())));
    count = std::min(count, sorted_desc_.size());
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += sorted_desc_[i];
    return s / total_;
}

InequalityReport inequality_report(const std::vector<double>& values) {
    InequalityReport rep;
    rep.lorenz = lorenz_curve(values);
    rep.gini = gini(values);
    rep.sorted_desc_ = values;
    std::sort(rep.sorted_desc_.begin(), rep.sorted_desc_.end(), std::greater<>());
    rep.total_ = std::accumulate(values.begin(), values.end(), 0.0);
    return rep;
}

RankComparison rank_comparison(const std::vector<double>& gamma,
                               const std::vector<std::uint64_t>& outdegrees, std::uint32_t k) {
    std::size_t n = gamma.size();
    if (outdegrees.size() != n) throw std::invalid_argument("vector size mismatch");
    if (k > n) throw std::invalid_argument("k exceeds user count");

    std::vector<NodeId> by_gamma(n), by_outdeg(n);
    std::iota(by_gamma.begin(), by_gamma.end(), 0);
    std::iota(by_outdeg.begin(), by_outdeg.end(), 0);
    std::sort(by_gamma.begin(), by_gamma.end(), [&](NodeId a, NodeId b) {
        return gamma[a] != gamma[b] ? gamma[a] > gamma[b] : a < b;
    });
    std::sort(by_outdeg.begin(), by_outdeg.end(), [&](NodeId a, NodeId b) {
        return outdegrees[a] != outdegrees[b] ? outdegrees[a] > outdegrees[b] : a < b;
    });

    std::vector<std::uint32_t> gamma_rank(n), outdeg_rank(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        gamma_rank[by_gamma[i]] = i + 1;
        outdeg_rank[by_outdeg[i]] = i + 1;
    }

    RankComparison out;
    for (std::uint32_t i = 0; i < k; ++i) {
        NodeId u = by_gamma[i];
        out.top_by_gamma.push_back({outdeg_rank[u], u, gamma[u], outdegrees[u]});
        NodeId v = by_outdeg[i];
        out.top_by_outdegree.push_back({gamma_rank[v], v, gamma[v], outdegrees[v]});
    }
    return out;
}

InfluencerThresholds default_thresholds(const InfluenceGraph& g) {
    std::vector<std::uint64_t> outdeg(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) outdeg[u] = g.outdegree(u);
    std::sort(outdeg.begin(), outdeg.end());
    std::size_t idx = std::size_t(0.999 * double(outdeg.size()));
    idx = std::min(idx, outdeg.size() - 1);
    InfluencerThresholds t;
    t.many_followers = std::max<std::uint64_t>(outdeg[idx], 1);
    t.dedicated_max_follows = 3;
    t.dedicated_group_min = 30;
    t.confidant_max_follows = 10;
    t.top_gamma_fraction = 0.01;
    return t;
}

InfluencerReport classify_influencers(const InfluenceGraph& g, const std::vector<double>& gamma,
                                      const InfluencerThresholds& thresholds) {
    NodeId n = g.node_count();
    if (gamma.size() != n) throw std::invalid_argument("gamma size mismatch");

    InfluencerReport rep;
    rep.thresholds = thresholds;
    rep.tags.assign(n, 0);

    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return gamma[a] != gamma[b] ? gamma[a] > gamma[b] : a < b;
    });
    std::size_t top_count =
        std::max<std::size_t>(1, std::size_t(thresholds.top_gamma_fraction * double(n)));
    rep.top_gamma.assign(order.begin(), order.begin() + long(top_count));
    std::vector<bool> is_top(n, false);
    for (NodeId u : rep.top_gamma) is_top[u] = true;

    for (NodeId u = 0; u < n; ++u) {
        std::uint64_t followers = g.outdegree(u);
        if (followers >= thresholds.many_followers) rep.tags[u] |= kManyFollowers;

        // followers of u that follow few users themselves
        std::uint64_t dedicated = 0;
        for (const NodeId* f = g.out_begin(u); f != g.out_end(u); ++f)
            if (g.indegree(*f) <= thresholds.dedicated_max_follows) ++dedicated;
        if (dedicated >= thresholds.dedicated_group_min) rep.tags[u] |= kDedicatedCommunity;

        // u is among the few users followed by a top-gamma user
        for (const NodeId* f = g.out_begin(u); f != g.out_end(u); ++f)
            if (is_top[*f] && g.indegree(*f) <= thresholds.confidant_max_follows) {
                rep.tags[u] |= kConfidantOfInfluencer;
                break;
            }
    }

    std::size_t covered = 0;
    for (NodeId u : rep.top_gamma)
        if (rep.tags[u] != 0) ++covered;
    rep.coverage = double(covered) / double(rep.top_gamma.size());
    return rep;
}

std::vector<double> sup_norm_series(const Trajectory& traj, const std::vector<double>& reference,
                                    TrajectoryField field) {
    const auto& snaps = field == TrajectoryField::X ? traj.x_snapshots : traj.z_snapshots;
    std::vector<double> out;
    out.reserve(snaps.size());
    for (const auto& snap : snaps) {
        if (snap.size() != reference.size()) throw std::invalid_argument("dimension mismatch");
        double m = 0.0;
        for (std::size_t i = 0; i < snap.size(); ++i)
            m = std::max(m, std::abs(snap[i] - reference[i]));
        out.push_back(m);
    }
    return out;
}

SlopeFit loglog_slope(const std::vector<std::uint64_t>& times, const std::vector<double>& series,
                      double tail_fraction) {
    if (times.size() != series.size()) throw std::invalid_argument("series size mismatch");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw std::invalid_argument("tail_fraction must be in (0,1]");
    std::size_t n = series.size();
    if (n < 2) throw std::invalid_argument("need at least 2 samples");

    std::size_t count = std::max<std::size_t>(2, std::size_t(std::ceil(tail_fraction * double(n))));
    std::size_t begin = n - count;

    SlopeFit fit;
    fit.points = count;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = begin; i < n; ++i) {
        double y = series[i];
        if (y <= 0.0) {
            y = std::numeric_limits<double>::epsilon();
            fit.floored = true;
        }
        double lx = std::log(double(times[i]));
        double ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double c = double(count);
    double denom = c * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("degenerate time axis");
    fit.slope = (c * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / c;
    return fit;
}

}  // namespace recmarket
