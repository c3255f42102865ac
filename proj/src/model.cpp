#include "recmarket/model.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

namespace recmarket {

std::vector<double> MarketModel::preference_column(ProductId p) const {
    std::vector<double> b(user_count());
    for (NodeId u = 0; u < user_count(); ++u) b[u] = preference(u, p);
    return b;
}

double MarketModel::max_alpha() const {
    double m = 0.0;
    for (double a : alpha) m = std::max(m, a);
    return m;
}

PreferenceSpec::Family PreferenceSpec::family_from_string(const std::string& s) {
    if (s == "uniform" || s == "uniform01") return Family::Uniform01;
    if (s == "exponential") return Family::Exponential;
    if (s == "powerlaw") return Family::PowerLaw;
    if (s == "normal") return Family::Normal;
    throw std::invalid_argument("unknown preference family '" + s + "'");
}

std::string PreferenceSpec::family_to_string(Family f) {
    switch (f) {
        case Family::Uniform01: return "uniform";
        case Family::Exponential: return "exponential";
        case Family::PowerLaw: return "powerlaw";
        case Family::Normal: return "normal";
    }
    return "?";
}

MarketModel build_basic_scenario(const InfluenceGraph& g, double alpha,
                                 std::vector<double> preferences,
                                 std::vector<std::vector<ProductId>> histories) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in [0,1)");
    NodeId n = g.node_count();
    if (n == 0) throw std::invalid_argument("empty graph");
    if (preferences.size() % n != 0) throw std::invalid_argument("preference matrix is not n x m");
    ProductId m = ProductId(preferences.size() / n);
    if (m == 0) throw std::invalid_argument("no products");
    for (NodeId u = 0; u < n; ++u) {
        double s = 0.0;
        for (ProductId p = 0; p < m; ++p) s += preferences[std::size_t(u) * m + p];
        if (std::abs(s - 1.0) > 1e-12)
            throw std::invalid_argument("preference row " + std::to_string(u) +
                                        " is not stochastic");
    }
    if (histories.size() != n) throw std::invalid_argument("histories size mismatch");
    for (NodeId u = 0; u < n; ++u)
        if (histories[u].empty())
            throw std::invalid_argument("history of user " + std::to_string(u) + " is empty");

    // Uniform recommender choice: in-weights 1/indeg regardless of input.
    std::vector<Arc> arcs;
    arcs.reserve(g.arc_count());
    for (NodeId u = 0; u < n; ++u) {
        NodeId d = g.indegree(u);
        for (auto [v, w] : g.in_arcs(u)) arcs.push_back({v, u, 1.0 / double(d)});
    }
    InfluenceGraph uniform(n, std::move(arcs));

    MarketModel model;
    model.product_count = m;
    model.alpha.resize(n);
    for (NodeId u = 0; u < n; ++u) model.alpha[u] = uniform.indegree(u) > 0 ? alpha : 0.0;
    model.rates.assign(n, 1.0 / double(n));
    model.preferences = std::move(preferences);
    model.histories = std::move(histories);
    model.graph = std::move(uniform);
    return model;
}

namespace {

double draw_in_unit_interval(std::mt19937_64& rng, const PreferenceSpec& spec) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    switch (spec.family) {
        case PreferenceSpec::Family::Uniform01:
            return unit(rng);
        case PreferenceSpec::Family::PowerLaw: {
            // density ~ x^e on (0,1], e = -0.01: inverse transform of CDF x^(1+e)
            double u = unit(rng);
            return std::pow(u, 1.0 / (1.0 + PreferenceSpec::kPowerLawExponent));
        }
        case PreferenceSpec::Family::Exponential: {
            std::exponential_distribution<double> exp_dist(1.0 / PreferenceSpec::kExponentialMean);
            if (spec.truncation == PreferenceSpec::TruncationMode::Clip)
                return std::min(1.0, exp_dist(rng));
            for (;;) {
                double x = exp_dist(rng);
                if (x <= 1.0) return x;
            }
        }
        case PreferenceSpec::Family::Normal: {
            std::normal_distribution<double> norm(PreferenceSpec::kNormalMean,
                                                  PreferenceSpec::kNormalStddev);
            if (spec.truncation == PreferenceSpec::TruncationMode::Clip)
                return std::clamp(norm(rng), 0.0, 1.0);
            for (;;) {
                double x = norm(rng);
                if (x >= 0.0 && x <= 1.0) return x;
            }
        }
    }
    return 0.0;
}

}  // namespace

std::vector<double> sample_preferences(NodeId n, ProductId m, const PreferenceSpec& spec,
                                       std::uint64_t seed) {
    if (n < 1 || m < 1) throw std::invalid_argument("need n,m >= 1");
    if (spec.imbalance < 1.0) throw std::invalid_argument("imbalance k must be >= 1");
    if (spec.focus_product >= m) throw std::invalid_argument("focus product out of range");

    std::mt19937_64 rng(seed);
    std::vector<double> mat(std::size_t(n) * m);
    for (NodeId u = 0; u < n; ++u) {
        double* row = mat.data() + std::size_t(u) * m;
        int attempts = 0;
        for (;;) {
            double sum = 0.0;
            for (ProductId p = 0; p < m; ++p) {
                double x = draw_in_unit_interval(rng, spec);
                if (p == spec.focus_product) x *= spec.imbalance;
                row[p] = x;
                sum += x;
            }
            if (sum > 0.0) {
                for (ProductId p = 0; p < m; ++p) row[p] /= sum;
                break;
            }
            if (++attempts >= 100)
                throw std::runtime_error("preference row " + std::to_string(u) +
                                         " kept summing to zero");
        }
    }
    return mat;
}

std::vector<std::vector<ProductId>> sample_histories(const std::vector<double>& preferences,
                                                     NodeId n, ProductId m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<ProductId>> hist(n);
    for (NodeId u = 0; u < n; ++u) {
        double r = unit(rng);
        double acc = 0.0;
        ProductId pick = m - 1;
        for (ProductId p = 0; p < m; ++p) {
            acc += preferences[std::size_t(u) * m + p];
            if (r < acc) {
                pick = p;
                break;
            }
        }
        hist[u] = {pick};
    }
    return hist;
}

std::vector<ModelViolation> validate(const MarketModel& model) {
    std::vector<ModelViolation> out;
    NodeId n = model.graph.node_count();
    ProductId m = model.product_count;

    if (model.alpha.size() != n)
        out.push_back({"alpha_size", -1, "expected " + std::to_string(n) + " entries"});
    if (model.rates.size() != n)
        out.push_back({"rates_size", -1, "expected " + std::to_string(n) + " entries"});
    if (model.preferences.size() != std::size_t(n) * m)
        out.push_back({"preferences_size", -1, "expected n*m entries"});
    if (model.histories.size() != n)
        out.push_back({"histories_size", -1, "expected " + std::to_string(n) + " entries"});
    if (!out.empty()) return out;  // follow-up checks need consistent shapes

    double rate_sum = 0.0;
    for (NodeId u = 0; u < n; ++u) {
        rate_sum += model.rates[u];
        if (!(model.rates[u] > 0.0))
            out.push_back({"rate_positive", long(u), "rate is " + std::to_string(model.rates[u])});
    }
    if (std::abs(rate_sum - 1.0) > 1e-12)
        out.push_back({"rates_sum_to_one", -1, "sum is " + std::to_string(rate_sum)});

    for (NodeId u = 0; u < n; ++u) {
        if (!(model.alpha[u] >= 0.0 && model.alpha[u] < 1.0))
            out.push_back({"alpha_range", long(u), "alpha is " + std::to_string(model.alpha[u])});
        else if (model.graph.indegree(u) == 0 && model.alpha[u] != 0.0)
            out.push_back({"alpha_zero_at_dangling", long(u),
                           "dangling node has alpha " + std::to_string(model.alpha[u])});
    }

    for (NodeId u = 0; u < n; ++u) {
        double s = 0.0;
        for (ProductId p = 0; p < m; ++p) s += model.preference(u, p);
        if (std::abs(s - 1.0) > 1e-12)
            out.push_back({"preference_row_stochastic", long(u), "row sums to " + std::to_string(s)});
    }

    for (NodeId u = 0; u < n; ++u) {
        if (model.histories[u].empty())
            out.push_back({"history_nonempty", long(u), "k_u must be >= 1"});
        for (ProductId p : model.histories[u])
            if (p >= m) {
                out.push_back({"history_product_range", long(u),
                               "product " + std::to_string(p) + " out of range"});
                break;
            }
    }

    if (!model.graph.in_weights_normalized())
        out.push_back({"in_weights_normalized", -1, "in-weights do not sum to 1"});
    return out;
}

MarketModel load_model_config(const std::string& json_text, const std::string& base_dir,
                              bool undirected_graph) {
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("model config: ") + e.what());
    }

    if (!cfg.contains("graph_path")) throw std::invalid_argument("model config: missing graph_path");
    std::filesystem::path gp = cfg["graph_path"].get<std::string>();
    if (gp.is_relative() && !base_dir.empty()) gp = std::filesystem::path(base_dir) / gp;
    std::ifstream gf(gp);
    if (!gf) throw std::invalid_argument("model config: cannot open graph file " + gp.string());
    InfluenceGraph g = normalize_in_weights(
        parse_edge_list(gf, /*directed=*/!undirected_graph, /*weighted=*/true).graph);

    NodeId n = g.node_count();
    ProductId m = cfg.value("products", 2u);
    if (m < 1) throw std::invalid_argument("model config: products must be >= 1");
    std::uint64_t seed = cfg.value("seed", std::uint64_t(0));

    MarketModel model;
    model.product_count = m;

    if (cfg.contains("alpha") && cfg["alpha"].is_array()) {
        model.alpha = cfg["alpha"].get<std::vector<double>>();
        if (model.alpha.size() != n)
            throw std::invalid_argument("model config: alpha array size mismatch");
    } else {
        double a = cfg.value("alpha", 0.2);
        if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("model config: alpha not in [0,1)");
        model.alpha.resize(n);
        for (NodeId u = 0; u < n; ++u) model.alpha[u] = g.indegree(u) > 0 ? a : 0.0;
    }

    if (cfg.contains("rates") && cfg["rates"].is_array()) {
        model.rates = cfg["rates"].get<std::vector<double>>();
        if (model.rates.size() != n)
            throw std::invalid_argument("model config: rates array size mismatch");
    } else {
        std::string mode = cfg.contains("rates") ? cfg["rates"].get<std::string>() : "uniform";
        if (mode != "uniform") throw std::invalid_argument("model config: rates must be array or 'uniform'");
        model.rates.assign(n, 1.0 / double(n));
    }

    PreferenceSpec spec;
    if (cfg.contains("preference_spec")) {
        const auto& ps = cfg["preference_spec"];
        if (ps.contains("family"))
            spec.family = PreferenceSpec::family_from_string(ps["family"].get<std::string>());
        spec.imbalance = ps.value("k", 1.0);
        if (ps.value("truncation", std::string("reject")) == "clip")
            spec.truncation = PreferenceSpec::TruncationMode::Clip;
        spec.focus_product = ps.value("focus_product", 0u);
    }
    if (cfg.contains("preferences") && cfg["preferences"].is_array()) {
        for (const auto& row : cfg["preferences"])
            for (const auto& v : row) model.preferences.push_back(v.get<double>());
        if (model.preferences.size() != std::size_t(n) * m)
            throw std::invalid_argument("model config: preferences shape mismatch");
    } else {
        model.preferences = sample_preferences(n, m, spec, seed);
    }

    if (cfg.contains("histories") && cfg["histories"].is_array()) {
        model.histories = cfg["histories"].get<std::vector<std::vector<ProductId>>>();
        if (model.histories.size() != n)
            throw std::invalid_argument("model config: histories size mismatch");
    } else {
        model.histories = sample_histories(model.preferences, n, m, seed + 1);
    }

    model.graph = std::move(g);
    return model;
}

}  // namespace recmarket
