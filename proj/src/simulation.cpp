#include "recmarket/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace recmarket {

RecommendationRule RecommendationRule::windowed(std::uint32_t w) {
    if (w == 0) throw std::invalid_argument("window must be >= 1");
    return {Kind::Window, w, 0, 1, 2.0};
}

RecommendationRule RecommendationRule::from_string(const std::string& s) {
    auto colon = s.find(':');
    std::string head = s.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
    try {
        if (head == "uniform") return uniform_all();
        if (head == "window") return windowed(std::uint32_t(std::stoul(arg)));
        if (head == "fixed-past") return fixed_past();
        if (head == "periodic") {
            auto comma = arg.find(',');
            if (comma == std::string::npos) throw std::invalid_argument("periodic needs a,b");
            return periodic(ProductId(std::stoul(arg.substr(0, comma))),
                            ProductId(std::stoul(arg.substr(comma + 1))));
        }
        if (head == "superlinear") return superlinear(std::stod(arg));
        if (head == "always") return always(ProductId(std::stoul(arg)));
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rule argument in '" + s + "'");
    }
    throw std::invalid_argument("unknown rule '" + s + "'");
}

std::string RecommendationRule::to_string() const {
    switch (kind) {
        case Kind::UniformAll: return "uniform";
        case Kind::Window: return "window:" + std::to_string(window);
        case Kind::FixedPast: return "fixed-past";
        case Kind::Periodic:
            return "periodic:" + std::to_string(product_a) + "," + std::to_string(product_b);
        case Kind::Superlinear: {
            std::string b = std::to_string(beta);
            return "superlinear:" + b;
        }
        case Kind::Always: return "always:" + std::to_string(product_a);
    }
    return "?";
}

SimulationState::SimulationState(const MarketModel& model, const RecommendationRule& rule,
                                 std::uint64_t seed)
    : model_(&model), m_(model.product_count), rng_(seed) {
    NodeId n = model.user_count();
    counts_.assign(std::size_t(n) * m_, 0);
    totals_.assign(n, 0);
    since_counts_.assign(std::size_t(n) * m_, 0);
    since_totals_.assign(n, 0);
    seed_counts_.assign(std::size_t(n) * m_, 0);

    if (rule.kind == RecommendationRule::Kind::Window) {
        window_ = rule.window;
        ring_.assign(std::size_t(n) * window_, 0);
        ring_head_.assign(n, 0);
        ring_fill_.assign(n, 0);
        window_counts_.assign(std::size_t(n) * m_, 0);
    }

    for (NodeId u = 0; u < n; ++u) {
        const auto& hist = model.histories[u];
        for (ProductId p : hist) {
            if (p >= m_) throw std::invalid_argument("history product out of range");
            ++counts_[std::size_t(u) * m_ + p];
            ++seed_counts_[std::size_t(u) * m_ + p];
            ++totals_[u];
        }
        if (window_ > 0) {
            // seed items enter the buffer as the oldest entries
            std::size_t start = hist.size() > window_ ? hist.size() - window_ : 0;
            for (std::size_t i = start; i < hist.size(); ++i) {
                ring_[std::size_t(u) * window_ + ring_head_[u]] = hist[i];
                ring_head_[u] = (ring_head_[u] + 1) % window_;
                ++ring_fill_[u];
                ++window_counts_[std::size_t(u) * m_ + hist[i]];
            }
        }
    }

    // Walker alias table over the purchase rates.
    alias_prob_.assign(n, 0.0);
    alias_other_.assign(n, 0);
    {
        std::vector<double> scaled(n);
        std::vector<NodeId> small, large;
        for (NodeId u = 0; u < n; ++u) {
            scaled[u] = model.rates[u] * double(n);
            (scaled[u] < 1.0 ? small : large).push_back(u);
        }
        while (!small.empty() && !large.empty()) {
            NodeId s = small.back(), l = large.back();
            small.pop_back();
            alias_prob_[s] = scaled[s];
            alias_other_[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (NodeId u : large) alias_prob_[u] = 1.0;
        for (NodeId u : small) alias_prob_[u] = 1.0;  // numerical leftovers
    }

    // Per-node in-weight prefix sums; uniform rows take the O(1) path.
    const auto& off = model.graph.in_offsets();
    const auto& w = model.graph.in_weights();
    in_prefix_.assign(w.size(), 0.0);
    in_uniform_.assign(n, false);
    for (NodeId u = 0; u < n; ++u) {
        std::size_t b = off[u], e = off[u + 1];
        if (b == e) continue;
        double first = w[b];
        bool uniform = true;
        double acc = 0.0;
        for (std::size_t i = b; i < e; ++i) {
            if (w[i] != first) uniform = false;
            acc += w[i];
            in_prefix_[i] = acc;
        }
        in_uniform_[u] = uniform;
    }

    dist_buf_.assign(m_, 0.0);
}

void SimulationState::record_purchase(NodeId u, ProductId p) {
    ++counts_[std::size_t(u) * m_ + p];
    ++totals_[u];
    ++since_counts_[std::size_t(u) * m_ + p];
    ++since_totals_[u];
    if (window_ > 0) {
        std::size_t base = std::size_t(u) * window_;
        if (ring_fill_[u] == window_) {
            ProductId old = ring_[base + ring_head_[u]];
            --window_counts_[std::size_t(u) * m_ + old];
        } else {
            ++ring_fill_[u];
        }
        ring_[base + ring_head_[u]] = p;
        ring_head_[u] = (ring_head_[u] + 1) % window_;
        ++window_counts_[std::size_t(u) * m_ + p];
    }
}

double SimulationState::local_market_share(NodeId u, ProductId product) const {
    if (since_totals_[u] == 0) return 0.0;
    return double(since_counts_[std::size_t(u) * m_ + product]) / double(since_totals_[u]);
}

double SimulationState::share_with_history(NodeId u, ProductId product) const {
    return double(counts_[std::size_t(u) * m_ + product]) / double(totals_[u]);
}

void recommendation_distribution(const SimulationState& state, const RecommendationRule& rule,
                                 NodeId user, std::vector<double>& out) {
    ProductId m = state.m_;
    out.assign(m, 0.0);
    std::size_t base = std::size_t(user) * m;

    switch (rule.kind) {
        case RecommendationRule::Kind::UniformAll: {
            double total = double(state.totals_[user]);
            for (ProductId p = 0; p < m; ++p) out[p] = double(state.counts_[base + p]) / total;
            break;
        }
        case RecommendationRule::Kind::Window: {
            double fill = double(state.ring_fill_[user]);
            for (ProductId p = 0; p < m; ++p)
                out[p] = double(state.window_counts_[base + p]) / fill;
            break;
        }
        case RecommendationRule::Kind::FixedPast: {
            double k = 0.0;
            for (ProductId p = 0; p < m; ++p) k += double(state.seed_counts_[base + p]);
            for (ProductId p = 0; p < m; ++p) out[p] = double(state.seed_counts_[base + p]) / k;
            break;
        }
        case RecommendationRule::Kind::Periodic: {
            // parity of the global step clock; t is the step being served
            ProductId pick = (state.t_ % 2 == 0) ? rule.product_a : rule.product_b;
            out[pick] = 1.0;
            break;
        }
        case RecommendationRule::Kind::Superlinear: {
            double total = double(state.totals_[user]);
            double norm = 0.0;
            for (ProductId p = 0; p < m; ++p) {
                double share = double(state.counts_[base + p]) / total;
                double v = std::pow(share, rule.beta);
                out[p] = v;
                norm += v;
            }
            for (ProductId p = 0; p < m; ++p) out[p] /= norm;
            break;
        }
        case RecommendationRule::Kind::Always:
            out[rule.product_a] = 1.0;
            break;
    }
}

std::vector<double> recommendation_distribution(const SimulationState& state,
                                                const RecommendationRule& rule, NodeId user) {
    std::vector<double> out;
    recommendation_distribution(state, rule, user, out);
    return out;
}

PurchaseEvent step(SimulationState& state, const MarketModel& model,
                   const RecommendationRule& rule) {
    ++state.t_;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto& rng = state.rng_;
    NodeId n = model.user_count();
    ProductId m = model.product_count;

    // buyer ~ f via the alias table
    NodeId buyer;
    {
        double r = unit(rng) * double(n);
        NodeId slot = std::min(NodeId(r), NodeId(n - 1));
        buyer = (r - double(slot)) < state.alias_prob_[slot] ? slot : state.alias_other_[slot];
    }

    PurchaseEvent ev{buyer, 0, false, std::nullopt};
    if (unit(rng) < 1.0 - model.alpha[buyer]) {
        // personal preference draw
        double r = unit(rng);
        double acc = 0.0;
        ProductId pick = m - 1;
        for (ProductId p = 0; p < m; ++p) {
            acc += model.preference(buyer, p);
            if (r < acc) {
                pick = p;
                break;
            }
        }
        ev.product = pick;
    } else {
        // recommender ~ w_{v,buyer} among in-neighbors
        const auto& off = model.graph.in_offsets();
        const auto& src = model.graph.in_sources();
        std::size_t b = off[buyer], e = off[buyer + 1];
        if (b == e) throw std::logic_error("recommendation branch at a node with no in-arcs");
        NodeId rec;
        if (state.in_uniform_[buyer]) {
            std::uniform_int_distribution<std::size_t> pick(0, e - b - 1);
            rec = src[b + pick(rng)];
        } else {
            double total = state.in_prefix_[e - 1];
            double r = unit(rng) * total;
            std::size_t lo = b, hi = e - 1;
            while (lo < hi) {
                std::size_t mid = (lo + hi) / 2;
                if (state.in_prefix_[mid] > r)
                    hi = mid;
                else
                    lo = mid + 1;
            }
            rec = src[lo];
        }

        recommendation_distribution(state, rule, rec, state.dist_buf_);
        double r = unit(rng);
        double acc = 0.0;
        ProductId pick = m - 1;
        for (ProductId p = 0; p < m; ++p) {
            acc += state.dist_buf_[p];
            if (r < acc) {
                pick = p;
                break;
            }
        }
        ev.product = pick;
        ev.via_recommendation = true;
        ev.recommender = rec;
    }

    state.record_purchase(ev.buyer, ev.product);
    return ev;
}

std::vector<double> local_market_shares(const SimulationState& state, ProductId product) {
    std::vector<double> z(state.user_count());
    for (NodeId u = 0; u < state.user_count(); ++u) z[u] = state.local_market_share(u, product);
    return z;
}

RunResult run(const MarketModel& model, const RecommendationRule& rule, std::uint64_t steps,
              std::uint64_t seed, std::uint64_t sample_every, ProductId focus) {
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
    if (focus >= model.product_count) throw std::invalid_argument("focus product out of range");

    SimulationState state(model, rule, seed);
    NodeId n = model.user_count();
    ProductId m = model.product_count;

    Trajectory traj;
    traj.seed = seed;
    traj.focus = focus;
    traj.rule = rule.to_string();
    std::size_t samples = std::size_t(steps / sample_every) + (steps % sample_every ? 1 : 0);
    traj.times.reserve(samples);
    traj.x_snapshots.reserve(samples);
    traj.z_snapshots.reserve(samples);
    traj.aggregate_share.reserve(samples);

    std::vector<double> dist;
    for (std::uint64_t t = 1; t <= steps; ++t) {
        step(state, model, rule);
        if (t % sample_every == 0 || t == steps) {
            std::vector<double> x(n), z(n), agg(m, 0.0);
            for (NodeId u = 0; u < n; ++u) {
                recommendation_distribution(state, rule, u, dist);
                x[u] = dist[focus];
                z[u] = state.local_market_share(u, focus);
                for (ProductId p = 0; p < m; ++p) agg[p] += model.rates[u] * dist[p];
            }
            traj.times.push_back(t);
            traj.x_snapshots.push_back(std::move(x));
            traj.z_snapshots.push_back(std::move(z));
            traj.aggregate_share.push_back(std::move(agg));
        }
    }
    return {std::move(traj), std::move(state)};
}

}  // namespace recmarket
