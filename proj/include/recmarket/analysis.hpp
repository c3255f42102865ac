#pragma once

#include <cstdint>
#include <vector>

#include "recmarket/model.hpp"

namespace recmarket {

/// Limit of the expected recommendation probabilities for one product,
/// x = (I - AM)^-1 (I - A) b, with a certified fixed-point residual.
struct SteadyState {
    std::vector<double> x_infinity;
    double residual = 0.0;  // certified bound on ||x - ((I-A)b + AMx)||_inf
    std::size_t iterations = 0;
};

/// gamma^T = f^T (I - AM)^-1 (I - A); stochastic, entrywise within
/// epsilon of the exact values.
struct InfluenceVector {
    std::vector<double> gamma;
    double epsilon = 0.0;
    double gamma_max = 0.0;
    NodeId gamma_max_user = 0;
    std::size_t iterations = 0;
};

/// Fixed-point iteration x <- (I-A)b + AMx from x0 = b; geometric
/// contraction at rate max_u alpha_u. Returns x = b exactly when all
/// alpha are zero.
SteadyState solve_steady_state(const MarketModel& model, ProductId product, double tol);

/// Same solver against an arbitrary preference-column vector b (used for
/// coalition games where b is masked).
SteadyState solve_steady_state_b(const MarketModel& model, const std::vector<double>& b,
                                 double tol);

/// Truncated series gamma^T = f^T sum_i (AM)^i (I-A), stopping once the
/// certified entrywise tail bound drops below epsilon.
InfluenceVector compute_influence(const MarketModel& model, double epsilon);

/// Row `user` of L = (I-AM)^-1 (I-A): the per-user slices of x_inf[user].
/// slice[v] * b[v] is v's contribution to x_inf[user]; the row sums to 1.
std::vector<double> influence_slice(const MarketModel& model, NodeId user, double epsilon);

/// Delta = (gamma . b) / (f . b), the ratio between the market share at
/// the limit and the share without the recommender. Throws when f.b = 0.
double market_distortion(const MarketModel& model, const InfluenceVector& gamma,
                         ProductId product);

/// Reference personalized PageRank p^T = r^T (I - alpha W)^-1 (1 - alpha)
/// on the transposed graph, W uniform over the in-neighbors of each node
/// (so every node needs indegree >= 1). Kept independent of the model
/// machinery; used by the gamma-equivalence tests.
std::vector<double> personalized_pagerank(const InfluenceGraph& g, double alpha,
                                          const std::vector<double>& r, double epsilon);

/// Exact Shapley values of the coalition game where each user joins with
/// preference b_u or stays out with 0 and the worth of a coalition is the
/// limit market share f . x_inf. Enumerates all 2^n coalitions; n <= 20.
std::vector<double> shapley_bruteforce(const MarketModel& model, ProductId product, double tol);

}  // namespace recmarket
