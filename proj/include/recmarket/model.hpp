#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recmarket/graph.hpp"

namespace recmarket {

using ProductId = std::uint32_t;

/// Families for sampling personal preference rows. Draws outside [0,1] are
/// handled per TruncationMode; the focus product's draw is multiplied by
/// the imbalance k before the row is normalized.
struct PreferenceSpec {
    enum class Family { Uniform01, Exponential, PowerLaw, Normal };
    enum class TruncationMode { Reject, Clip };

    Family family = Family::Uniform01;
    TruncationMode truncation = TruncationMode::Reject;
    double imbalance = 1.0;       // k >= 1, mean multiplier for the focus column
    ProductId focus_product = 0;  // column receiving the imbalance

    // Fixed family parameters: Exponential has mean 1/2, PowerLaw has
    // density proportional to x^-0.01 on (0,1], Normal has mean 1/2 and
    // standard deviation 1/6.
    static constexpr double kExponentialMean = 0.5;
    static constexpr double kPowerLawExponent = -0.01;
    static constexpr double kNormalMean = 0.5;
    static constexpr double kNormalStddev = 1.0 / 6.0;

    static Family family_from_string(const std::string& s);
    static std::string family_to_string(Family f);
};

/// A complete market: influence graph, per-user recommendation-following
/// probabilities alpha, purchase rates f (a probability distribution),
/// row-stochastic preference matrix B, and nonempty initial purchase
/// histories.
struct MarketModel {
    InfluenceGraph graph;
    ProductId product_count = 0;
    std::vector<double> alpha;                       // in [0,1); 0 at dangling nodes
    std::vector<double> rates;                       // positive, sums to 1
    std::vector<double> preferences;                 // n x m, row-major, rows sum to 1
    std::vector<std::vector<ProductId>> histories;   // per user, length k_u >= 1

    NodeId user_count() const { return graph.node_count(); }
    double preference(NodeId u, ProductId p) const {
        return preferences[std::size_t(u) * product_count + p];
    }
    /// Column p of the preference matrix (the vector b for focus product p).
    std::vector<double> preference_column(ProductId p) const;
    double max_alpha() const;
};

struct ModelViolation {
    std::string invariant;  // which invariant failed
    long index;             // offending user/row index, -1 when global
    std::string detail;
};

/// Definition-1 model: uniform rates 1/n, alpha_u = alpha wherever
/// indegree(u) > 0 (0 elsewhere), in-weights forced uniform over
/// in-neighbors regardless of the input weighting.
MarketModel build_basic_scenario(const InfluenceGraph& g, double alpha,
                                 std::vector<double> preferences,
                                 std::vector<std::vector<ProductId>> histories);

/// n x m row-stochastic matrix sampled per spec; deterministic in
/// (spec, seed). Throws if a row keeps summing to zero after 100 redraws.
std::vector<double> sample_preferences(NodeId n, ProductId m, const PreferenceSpec& spec,
                                       std::uint64_t seed);

/// Default initial histories: one product per user drawn from that user's
/// preference row.
std::vector<std::vector<ProductId>> sample_histories(const std::vector<double>& preferences,
                                                     NodeId n, ProductId m, std::uint64_t seed);

/// Checks every MarketModel invariant; violations are data, not failures.
std::vector<ModelViolation> validate(const MarketModel& model);

/// Model config as JSON: {graph_path, alpha (scalar or array), rates
/// ("uniform" or array), products, preference_spec {family, k},
/// histories ("sampled" or explicit arrays), seed}. Relative graph_path
/// is resolved against base_dir.
MarketModel load_model_config(const std::string& json_text, const std::string& base_dir,
                              bool undirected_graph = false);

}  // namespace recmarket
