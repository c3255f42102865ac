#pragma once

// Seeded graph and model generators shared by the unit and acceptance
// suites.

#include <random>
#include <set>
#include <vector>

#include "recmarket/graph.hpp"
#include "recmarket/model.hpp"

namespace fixtures {

using recmarket::Arc;
using recmarket::InfluenceGraph;
using recmarket::MarketModel;
using recmarket::NodeId;
using recmarket::ProductId;

inline InfluenceGraph clique(NodeId n) {
    std::vector<Arc> arcs;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = 0; v < n; ++v)
            if (u != v) arcs.push_back({u, v, 1.0});
    return recmarket::normalize_in_weights(InfluenceGraph(n, std::move(arcs)));
}

// Oriented star: the center points to every leaf.
inline InfluenceGraph star_out(NodeId n) {
    std::vector<Arc> arcs;
    for (NodeId v = 1; v < n; ++v) arcs.push_back({0, v, 1.0});
    return recmarket::normalize_in_weights(InfluenceGraph(n, std::move(arcs)));
}

inline InfluenceGraph cycle(NodeId n) {
    std::vector<Arc> arcs;
    for (NodeId u = 0; u < n; ++u) arcs.push_back({u, (u + 1) % n, 1.0});
    return recmarket::normalize_in_weights(InfluenceGraph(n, std::move(arcs)));
}

// Sparse random digraph, possibly with dangling (indegree-0) nodes and
// random weights. avg_indeg in-arcs per node on average.
inline InfluenceGraph random_digraph(NodeId n, double avg_indeg, std::uint64_t seed,
                                     bool allow_dangling = true, bool uniform_weights = false) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<NodeId> node(0, n - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Arc> arcs;
    for (NodeId u = 0; u < n; ++u) {
        std::poisson_distribution<int> deg(avg_indeg);
        int d = deg(rng);
        if (!allow_dangling && d < 1) d = 1;
        if (allow_dangling && unit(rng) < 0.15) d = 0;  // force some dangling nodes
        std::set<NodeId> seen;
        for (int i = 0; i < d && int(seen.size()) < int(n); ++i) {
            NodeId v = node(rng);
            if (!seen.insert(v).second) continue;
            double w = uniform_weights ? 1.0 : 0.1 + unit(rng);
            arcs.push_back({v, u, w});
        }
    }
    return recmarket::normalize_in_weights(InfluenceGraph(n, std::move(arcs)));
}

// Strongly-seeded sparse digraph where every node has in-arcs: a directed
// cycle underlay plus random extra arcs, uniform in-weights.
inline InfluenceGraph random_digraph_no_dangling(NodeId n, double extra_indeg,
                                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<NodeId> node(0, n - 1);
    std::vector<Arc> arcs;
    for (NodeId u = 0; u < n; ++u) arcs.push_back({u, (u + 1) % n, 1.0});
    std::poisson_distribution<int> deg(extra_indeg);
    for (NodeId u = 0; u < n; ++u) {
        int d = deg(rng);
        std::set<NodeId> seen{(u + n - 1) % n};
        for (int i = 0; i < d && int(seen.size()) < int(n); ++i) {
            NodeId v = node(rng);
            if (!seen.insert(v).second) continue;
            arcs.push_back({v, u, 1.0});
        }
    }
    return recmarket::normalize_in_weights(InfluenceGraph(n, std::move(arcs)));
}

// Preferential-attachment digraph in the influence orientation: each new
// node follows `attach` existing nodes picked proportionally to their
// current follower count (outdegree) plus one, producing arcs hub -> new.
inline InfluenceGraph preferential_attachment(NodeId n, NodeId attach, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Arc> arcs;
    std::vector<NodeId> ball;  // node id repeated per (outdegree + 1)
    NodeId seed_nodes = std::max<NodeId>(attach + 1, 2);
    for (NodeId u = 0; u < seed_nodes; ++u) {
        for (NodeId v = 0; v < seed_nodes; ++v)
            if (u != v) arcs.push_back({u, v, 1.0});
        for (NodeId rep = 0; rep < seed_nodes; ++rep) ball.push_back(u);
    }
    for (NodeId v = seed_nodes; v < n; ++v) {
        std::set<NodeId> targets;
        while (targets.size() < attach) {
            std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
            NodeId w = ball[pick(rng)];
            if (w != v) targets.insert(w);
        }
        for (NodeId w : targets) {
            arcs.push_back({w, v, 1.0});
            ball.push_back(w);
        }
        ball.push_back(v);
    }
    return recmarket::normalize_in_weights(InfluenceGraph(n, std::move(arcs)));
}

// Random valid model: alpha_u ~ U[0, alpha_max] (0 at dangling nodes),
// positive normalized rates, uniform random stochastic preference rows,
// one-item histories.
inline MarketModel random_model(const InfluenceGraph& g, ProductId m, double alpha_max,
                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    NodeId n = g.node_count();

    MarketModel model;
    model.graph = g;
    model.product_count = m;
    model.alpha.resize(n);
    for (NodeId u = 0; u < n; ++u)
        model.alpha[u] = g.indegree(u) > 0 ? alpha_max * unit(rng) : 0.0;

    model.rates.resize(n);
    double rate_sum = 0.0;
    for (NodeId u = 0; u < n; ++u) {
        model.rates[u] = 0.05 + unit(rng);
        rate_sum += model.rates[u];
    }
    for (NodeId u = 0; u < n; ++u) model.rates[u] /= rate_sum;

    model.preferences.resize(std::size_t(n) * m);
    for (NodeId u = 0; u < n; ++u) {
        double s = 0.0;
        for (ProductId p = 0; p < m; ++p) {
            double v = 0.01 + unit(rng);
            model.preferences[std::size_t(u) * m + p] = v;
            s += v;
        }
        for (ProductId p = 0; p < m; ++p) model.preferences[std::size_t(u) * m + p] /= s;
    }

    model.histories.resize(n);
    std::uniform_int_distribution<ProductId> prod(0, m - 1);
    for (NodeId u = 0; u < n; ++u) model.histories[u] = {prod(rng)};
    return model;
}

}  // namespace fixtures
