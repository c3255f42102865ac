#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "recmarket/model.hpp"

namespace recmarket {

/// Policy producing per-product recommendation probabilities from a user's
/// purchase history (the weights h_u^{t,i} of the model, aggregated per
/// product).
struct RecommendationRule {
    enum class Kind {
        UniformAll,   // uniform over the whole history, basic scenario
        Window,       // uniform over the W most recent purchases
        FixedPast,    // all weight stays on the initial history (non-fading)
        Periodic,     // only product a on even steps, only b on odd steps
        Superlinear,  // probability proportional to (purchase share)^beta
        Always,       // always recommend one fixed product
    };

    Kind kind = Kind::UniformAll;
    std::uint32_t window = 0;   // Window
    ProductId product_a = 0;    // Periodic / Always
    ProductId product_b = 1;    // Periodic
    double beta = 2.0;          // Superlinear

    static RecommendationRule uniform_all() { return {}; }
    static RecommendationRule windowed(std::uint32_t w);
    static RecommendationRule fixed_past() { return {Kind::FixedPast, 0, 0, 1, 2.0}; }
    static RecommendationRule periodic(ProductId a, ProductId b) {
        return {Kind::Periodic, 0, a, b, 2.0};
    }
    static RecommendationRule superlinear(double beta) { return {Kind::Superlinear, 0, 0, 1, beta}; }
    static RecommendationRule always(ProductId p) { return {Kind::Always, 0, p, 1, 2.0}; }

    /// "uniform" | "window:W" | "fixed-past" | "periodic:a,b" |
    /// "superlinear:beta" | "always:p"
    static RecommendationRule from_string(const std::string& s);
    std::string to_string() const;
};

struct PurchaseEvent {
    NodeId buyer;
    ProductId product;
    bool via_recommendation;
    std::optional<NodeId> recommender;
};

/// Mutable state of the purchasing process: per-user per-product counts
/// (including the initial histories), counts since t=1, and a recency ring
/// buffer when a window rule is in play.
class SimulationState {
  public:
    SimulationState(const MarketModel& model, const RecommendationRule& rule, std::uint64_t seed);

    std::uint64_t t() const { return t_; }
    NodeId user_count() const { return NodeId(totals_.size()); }
    std::uint64_t total_purchases(NodeId u) const { return totals_[u]; }
    std::uint64_t purchases_since_start(NodeId u) const { return since_totals_[u]; }

    /// Purchases of `product` by u divided by all purchases by u counting
    /// from t=1 (initial history excluded); 0 before u's first purchase.
    double local_market_share(NodeId u, ProductId product) const;

    /// Purchase fraction including the initial history items.
    double share_with_history(NodeId u, ProductId product) const;

    // internals used by the stepper and the distribution evaluator
    friend PurchaseEvent step(SimulationState&, const MarketModel&, const RecommendationRule&);
    friend void recommendation_distribution(const SimulationState&, const RecommendationRule&,
                                            NodeId, std::vector<double>&);

  private:
    void record_purchase(NodeId u, ProductId p);

    const MarketModel* model_;
    ProductId m_;
    std::uint64_t t_ = 0;
    std::vector<std::uint32_t> counts_;        // n x m, includes initial history
    std::vector<std::uint64_t> totals_;        // per user, includes k_u
    std::vector<std::uint32_t> since_counts_;  // n x m, purchases since t=1
    std::vector<std::uint64_t> since_totals_;  // per user, purchases since t=1
    std::vector<std::uint32_t> seed_counts_;   // n x m, the initial histories only

    // ring buffer of the last `window_` purchases per user (seed items oldest)
    std::uint32_t window_ = 0;
    std::vector<ProductId> ring_;
    std::vector<std::uint32_t> ring_head_;
    std::vector<std::uint32_t> ring_fill_;
    std::vector<std::uint32_t> window_counts_;  // n x m

    std::mt19937_64 rng_;

    // buyer sampling: Walker alias table over the rates
    std::vector<double> alias_prob_;
    std::vector<NodeId> alias_other_;
    // recommender sampling: per-node prefix sums of in-weights, with a
    // fast path when the in-weights are uniform
    std::vector<double> in_prefix_;
    std::vector<bool> in_uniform_;

    mutable std::vector<double> dist_buf_;
};

/// The stochastic vector x_u^t(.) produced by `rule` for `user`, written
/// into `out` (resized to the product count). Entries are nonnegative and
/// sum to 1 for every reachable history.
void recommendation_distribution(const SimulationState& state, const RecommendationRule& rule,
                                 NodeId user, std::vector<double>& out);

std::vector<double> recommendation_distribution(const SimulationState& state,
                                                const RecommendationRule& rule, NodeId user);

/// One purchase: draws the buyer from the rates, then either a preference
/// draw (probability 1 - alpha_u) or a recommender draw followed by a
/// product from the recommender's rule distribution. Advances t.
PurchaseEvent step(SimulationState& state, const MarketModel& model,
                   const RecommendationRule& rule);

struct Trajectory {
    std::vector<std::uint64_t> times;
    std::vector<std::vector<double>> x_snapshots;       // per sample: x_u^t(focus), length n
    std::vector<std::vector<double>> z_snapshots;       // per sample: LMS since t=1, length n
    std::vector<std::vector<double>> aggregate_share;   // per sample: f-weighted x^t per product
    std::uint64_t seed = 0;
    ProductId focus = 0;
    std::string rule;
};

struct RunResult {
    Trajectory trajectory;
    SimulationState state;
};

/// Runs `steps` purchases, snapshotting every `sample_every` steps (and at
/// the final step). Deterministic given (model, rule, steps, seed).
RunResult run(const MarketModel& model, const RecommendationRule& rule, std::uint64_t steps,
              std::uint64_t seed, std::uint64_t sample_every, ProductId focus = 0);

/// z vector of Definition 2 for every user.
std::vector<double> local_market_shares(const SimulationState& state, ProductId product);

}  // namespace recmarket
