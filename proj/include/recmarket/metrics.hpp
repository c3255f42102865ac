#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "recmarket/graph.hpp"
#include "recmarket/simulation.hpp"

namespace recmarket {

struct LorenzPoint {
    double population_fraction;
    double value_fraction;
};

struct InequalityReport {
    std::vector<LorenzPoint> lorenz;  // (0,0) .. (1,1), nondecreasing
    double gini = 0.0;
    /// Influence held by the top q fraction of users (0 < q <= 1).
    double top_share(double q) const;

  private:
    friend InequalityReport inequality_report(const std::vector<double>& values);
    std::vector<double> sorted_desc_;
    double total_ = 0.0;
};

/// Sorted-ascending cumulative curve; point i is (i/n, cumsum_i/total),
/// preceded by (0,0). Throws on an all-zero vector.
std::vector<LorenzPoint> lorenz_curve(const std::vector<double>& values);

/// Discrete Gini G = sum_i (2i - n - 1) y_(i) / (n sum y), ascending sort,
/// 1-based i. No small-sample correction.
double gini(const std::vector<double>& values);

InequalityReport inequality_report(const std::vector<double>& values);

struct RankEntry {
    std::uint32_t rank_in_other;  // 1-based
    NodeId user;
    double gamma;
    std::uint64_t outdegree;
};

/// Top-k users by gamma annotated with their outdegree ranks, and top-k
/// users by outdegree annotated with their gamma ranks. Ties break toward
/// the lowest user id.
struct RankComparison {
    std::vector<RankEntry> top_by_gamma;      // rank_in_other = outdegree rank
    std::vector<RankEntry> top_by_outdegree;  // rank_in_other = gamma rank
};

RankComparison rank_comparison(const std::vector<double>& gamma,
                               const std::vector<std::uint64_t>& outdegrees, std::uint32_t k);

struct InfluencerThresholds {
    std::uint64_t many_followers;        // tau1: follower count at/above which a user qualifies
    std::uint64_t dedicated_max_follows; // tau2: a dedicated follower follows at most this many
    std::uint64_t dedicated_group_min;   // tau3: minimum size of the dedicated group
    std::uint64_t confidant_max_follows; // tau4: max users followed by the influential follower
    double top_gamma_fraction = 0.01;    // which users count as "top-gamma"
};

enum InfluencerTag : unsigned {
    kManyFollowers = 1u << 0,
    kDedicatedCommunity = 1u << 1,
    kConfidantOfInfluencer = 1u << 2,
};

struct InfluencerReport {
    std::vector<unsigned> tags;        // bitmask per user
    std::vector<NodeId> top_gamma;     // the users the rule of thumb targets
    double coverage = 0.0;             // fraction of top_gamma carrying >= 1 tag
    InfluencerThresholds thresholds;
};

/// Default tau1 = 99.9th percentile outdegree; tau2 = 3, tau3 = 30,
/// tau4 = 10, top 1% by gamma.
InfluencerThresholds default_thresholds(const InfluenceGraph& g);

/// Tags every user per the two-hop rule of thumb. In the influence
/// orientation an arc u -> v means v follows u, so followers of u are its
/// out-neighbors and the users v follows are its in-neighbors.
InfluencerReport classify_influencers(const InfluenceGraph& g, const std::vector<double>& gamma,
                                      const InfluencerThresholds& thresholds);

enum class TrajectoryField { X, Z };

/// ||snapshot - reference||_inf per sample time.
std::vector<double> sup_norm_series(const Trajectory& traj, const std::vector<double>& reference,
                                    TrajectoryField field);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t points = 0;
    bool floored = false;  // some values were at or below 0 and got floored
};

/// Least-squares fit of log(value) against log(t) over the last
/// tail_fraction of samples. Nonpositive values are floored at machine
/// epsilon and flagged.
SlopeFit loglog_slope(const std::vector<std::uint64_t>& times, const std::vector<double>& series,
                      double tail_fraction);

}  // namespace recmarket
