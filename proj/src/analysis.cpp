#include "recmarket/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace recmarket {

namespace {

// y[u] = sum over in-arcs (v,u) of w_vu * x[v], i.e. y = M x.
void apply_m(const InfluenceGraph& g, const std::vector<double>& x, std::vector<double>& y) {
    const auto& off = g.in_offsets();
    const auto& src = g.in_sources();
    const auto& w = g.in_weights();
    for (NodeId u = 0; u < g.node_count(); ++u) {
        double acc = 0.0;
        for (std::size_t i = off[u]; i < off[u + 1]; ++i) acc += w[i] * x[src[i]];
        y[u] = acc;
    }
}

// out[v] = sum over in-arcs (v,u) of w_vu * x[u], i.e. out^T = x^T M.
void apply_m_left(const InfluenceGraph& g, const std::vector<double>& x, std::vector<double>& out) {
    const auto& off = g.in_offsets();
    const auto& src = g.in_sources();
    const auto& w = g.in_weights();
    std::fill(out.begin(), out.end(), 0.0);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        double xu = x[u];
        if (xu == 0.0) continue;
        for (std::size_t i = off[u]; i < off[u + 1]; ++i) out[src[i]] += w[i] * xu;
    }
}

// Shared series driver: accumulates sum_i v_i^T (I-A) with v_{i+1}^T =
// v_i^T (A M), stopping when the entrywise tail bound ||v||_1 / (1-a_max)
// drops below epsilon.
std::size_t influence_series(const MarketModel& model, std::vector<double> v, double epsilon,
                             std::vector<double>& acc) {
    NodeId n = model.user_count();
    double a_max = model.max_alpha();
    acc.assign(n, 0.0);
    std::vector<double> scaled(n), next(n);

    std::size_t terms = 0;
    for (;;) {
        double l1 = 0.0;
        for (NodeId u = 0; u < n; ++u) {
            acc[u] += v[u] * (1.0 - model.alpha[u]);
            l1 += std::abs(v[u]);
        }
        ++terms;
        if (a_max == 0.0 || l1 <= epsilon * (1.0 - a_max)) break;
        for (NodeId u = 0; u < n; ++u) scaled[u] = v[u] * model.alpha[u];
        apply_m_left(model.graph, scaled, next);
        v.swap(next);
    }
    return terms;
}

}  // namespace

SteadyState solve_steady_state_b(const MarketModel& model, const std::vector<double>& b,
                                 double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    NodeId n = model.user_count();
    if (b.size() != n) throw std::invalid_argument("b size mismatch");

    double a_max = model.max_alpha();
    SteadyState out;
    if (a_max == 0.0) {
        out.x_infinity = b;  // L = I
        return out;
    }

    std::size_t cap = std::size_t(std::ceil(std::log(tol) / std::log(a_max))) + 10;
    std::vector<double> x = b, mx(n), next(n);
    for (std::size_t it = 1; it <= cap; ++it) {
        apply_m(model.graph, x, mx);
        double diff = 0.0;
        for (NodeId u = 0; u < n; ++u) {
            next[u] = (1.0 - model.alpha[u]) * b[u] + model.alpha[u] * mx[u];
            diff = std::max(diff, std::abs(next[u] - x[u]));
        }
        x.swap(next);
        // ||x_k - F(x_k)||_inf <= a_max * ||x_k - x_{k-1}||_inf
        double residual_bound = a_max * diff;
        if (residual_bound <= tol) {
            out.x_infinity = std::move(x);
            out.residual = residual_bound;
            out.iterations = it;
            return out;
        }
    }
    throw std::runtime_error("steady-state iteration cap exceeded (numerical pathology)");
}

SteadyState solve_steady_state(const MarketModel& model, ProductId product, double tol) {
    if (product >= model.product_count) throw std::invalid_argument("product out of range");
    return solve_steady_state_b(model, model.preference_column(product), tol);
}

InfluenceVector compute_influence(const MarketModel& model, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    InfluenceVector out;
    out.epsilon = epsilon;
    out.iterations = influence_series(model, model.rates, epsilon, out.gamma);
    out.gamma_max = 0.0;
    out.gamma_max_user = 0;
    for (NodeId u = 0; u < model.user_count(); ++u) {
        if (out.gamma[u] > out.gamma_max) {  // ties keep the lowest user id
            out.gamma_max = out.gamma[u];
            out.gamma_max_user = u;
        }
    }
    return out;
}

std::vector<double> influence_slice(const MarketModel& model, NodeId user, double epsilon) {
    if (user >= model.user_count()) throw std::invalid_argument("user out of range");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    std::vector<double> indicator(model.user_count(), 0.0);
    indicator[user] = 1.0;
    std::vector<double> row;
    influence_series(model, std::move(indicator), epsilon, row);
    return row;
}

double market_distortion(const MarketModel& model, const InfluenceVector& iv, ProductId product) {
    if (product >= model.product_count) throw std::invalid_argument("product out of range");
    double gb = 0.0, fb = 0.0;
    for (NodeId u = 0; u < model.user_count(); ++u) {
        double b = model.preference(u, product);
        gb += iv.gamma[u] * b;
        fb += model.rates[u] * b;
    }
    if (fb == 0.0)
        throw std::domain_error("focus product has zero base share; distortion undefined");
    return gb / fb;
}

std::vector<double> personalized_pagerank(const InfluenceGraph& g, double alpha,
                                          const std::vector<double>& r, double epsilon) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in [0,1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    NodeId n = g.node_count();
    if (r.size() != n) throw std::invalid_argument("r size mismatch");
    for (NodeId u = 0; u < n; ++u)
        if (g.indegree(u) == 0)
            throw std::invalid_argument("node " + std::to_string(u) +
                                        " is dangling in the transposed graph");

    const auto& off = g.in_offsets();
    const auto& src = g.in_sources();

    std::vector<double> p(n, 0.0), v = r, next(n);
    for (;;) {
        double l1 = 0.0;
        for (NodeId u = 0; u < n; ++u) {
            p[u] += (1.0 - alpha) * v[u];
            l1 += std::abs(v[u]);
        }
        if (alpha == 0.0 || l1 <= epsilon * (1.0 - alpha)) break;
        // next^T = alpha * v^T W, W uniform over in-neighbors (ignores weights)
        std::fill(next.begin(), next.end(), 0.0);
        for (NodeId u = 0; u < n; ++u) {
            double share = alpha * v[u] / double(off[u + 1] - off[u]);
            for (std::size_t i = off[u]; i < off[u + 1]; ++i) next[src[i]] += share;
        }
        v.swap(next);
    }
    return p;
}

std::vector<double> shapley_bruteforce(const MarketModel& model, ProductId product, double tol) {
    NodeId n = model.user_count();
    if (n > 20) throw std::invalid_argument("brute-force Shapley needs n <= 20");
    if (product >= model.product_count) throw std::invalid_argument("product out of range");

    std::vector<double> b = model.preference_column(product);

    // Worth of every coalition: v(S) = f . x_inf with b zeroed outside S.
    std::size_t total = std::size_t(1) << n;
    std::vector<double> worth(total);
    std::vector<double> masked(n);
    for (std::size_t mask = 0; mask < total; ++mask) {
        for (NodeId u = 0; u < n; ++u) masked[u] = (mask >> u) & 1 ? b[u] : 0.0;
        SteadyState ss = solve_steady_state_b(model, masked, tol);
        double fv = 0.0;
        for (NodeId u = 0; u < n; ++u) fv += model.rates[u] * ss.x_infinity[u];
        worth[mask] = fv;
    }

    // w_s = s! (n-s-1)! / n! for coalitions of size s not containing u.
    std::vector<double> coeff(n);
    for (NodeId s = 0; s < n; ++s) {
        double c = 1.0 / double(n);  // 1 / (n * binom(n-1, s))
        for (NodeId i = 1; i <= s; ++i) c *= double(i) / double(n - i);
        coeff[s] = c;
    }

    std::vector<double> phi(n, 0.0);
    for (std::size_t mask = 0; mask < total; ++mask) {
        unsigned size = unsigned(__builtin_popcountll(mask));
        for (NodeId u = 0; u < n; ++u) {
            if ((mask >> u) & 1) continue;
            phi[u] += coeff[size] * (worth[mask | (std::size_t(1) << u)] - worth[mask]);
        }
    }
    return phi;
}

}  // namespace recmarket
