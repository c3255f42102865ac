#include "recmarket/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace recmarket {

namespace {

constexpr std::uint64_t kMaxNodes = 100'000'000;  // sanity cap for dense remapping

}  // namespace

InfluenceGraph::InfluenceGraph(NodeId node_count, std::vector<Arc> arcs) : node_count_(node_count) {
    for (const Arc& a : arcs) {
        if (a.src >= node_count || a.dst >= node_count)
            throw std::invalid_argument("arc endpoint out of range");
        if (a.weight < 0.0) throw std::invalid_argument("negative arc weight");
    }
    // Merge duplicates by summing weights; canonical order is (dst, src).
    std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
        return a.dst != b.dst ? a.dst < b.dst : a.src < b.src;
    });
    std::vector<Arc> merged;
    merged.reserve(arcs.size());
    for (const Arc& a : arcs) {
        if (!merged.empty() && merged.back().dst == a.dst && merged.back().src == a.src)
            merged.back().weight += a.weight;
        else
            merged.push_back(a);
    }

    in_off_.assign(std::size_t(node_count) + 1, 0);
    out_off_.assign(std::size_t(node_count) + 1, 0);
    for (const Arc& a : merged) {
        ++in_off_[a.dst + 1];
        ++out_off_[a.src + 1];
    }
    for (std::size_t u = 0; u < node_count; ++u) {
        in_off_[u + 1] += in_off_[u];
        out_off_[u + 1] += out_off_[u];
    }
    in_src_.resize(merged.size());
    in_w_.resize(merged.size());
    out_dst_.resize(merged.size());
    std::vector<std::size_t> pos(node_count, 0);
    for (std::size_t i = 0; i < merged.size(); ++i) {  // already dst-major
        in_src_[i] = merged[i].src;
        in_w_[i] = merged[i].weight;
    }
    for (const Arc& a : merged) out_dst_[out_off_[a.src] + pos[a.src]++] = a.dst;
    for (NodeId u = 0; u < node_count; ++u)
        std::sort(out_dst_.begin() + long(out_off_[u]), out_dst_.begin() + long(out_off_[u + 1]));
}

std::vector<Arc> InfluenceGraph::arcs() const {
    std::vector<Arc> out;
    out.reserve(in_src_.size());
    for (NodeId u = 0; u < node_count_; ++u)
        for (std::size_t i = in_off_[u]; i < in_off_[u + 1]; ++i)
            out.push_back({in_src_[i], u, in_w_[i]});
    return out;
}

bool InfluenceGraph::in_weights_normalized(double tol) const {
    for (NodeId u = 0; u < node_count_; ++u) {
        if (indegree(u) == 0) continue;
        double s = 0.0;
        for (std::size_t i = in_off_[u]; i < in_off_[u + 1]; ++i) s += in_w_[i];
        if (std::abs(s - 1.0) > tol) return false;
    }
    return true;
}

std::size_t InfluenceGraph::dangling_count() const {
    std::size_t c = 0;
    for (NodeId u = 0; u < node_count_; ++u)
        if (indegree(u) == 0) ++c;
    return c;
}

NodeId InfluenceGraph::max_indegree() const {
    NodeId m = 0;
    for (NodeId u = 0; u < node_count_; ++u) m = std::max(m, indegree(u));
    return m;
}

NodeId InfluenceGraph::max_outdegree() const {
    NodeId m = 0;
    for (NodeId u = 0; u < node_count_; ++u) m = std::max(m, outdegree(u));
    return m;
}

ParsedGraph parse_edge_list(std::istream& in, bool directed, bool weighted) {
    std::vector<Arc> arcs;
    std::vector<std::uint64_t> original_ids;
    std::unordered_map<std::uint64_t, NodeId> remap;

    auto dense_id = [&](std::uint64_t raw) -> NodeId {
        auto it = remap.find(raw);
        if (it != remap.end()) return it->second;
        if (original_ids.size() >= kMaxNodes) throw ParseError(0, "node count overflow");
        NodeId id = NodeId(original_ids.size());
        remap.emplace(raw, id);
        original_ids.push_back(raw);
        return id;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos || line[begin] == '#') continue;

        const char* p = line.data() + begin;
        const char* end = line.data() + line.size();
        auto next_token = [&]() -> std::pair<const char*, const char*> {
            while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
            const char* tb = p;
            while (p < end && *p != ' ' && *p != '\t' && *p != '\r') ++p;
            return {tb, p};
        };

        auto [sb, se] = next_token();
        auto [db, de] = next_token();
        auto [wb, we] = next_token();
        auto [xb, xe] = next_token();
        if (sb == se || db == de) throw ParseError(lineno, "expected 'src dst [weight]'");
        if (xb != xe) throw ParseError(lineno, "trailing tokens");

        std::uint64_t s = 0, d = 0;
        if (auto r = std::from_chars(sb, se, s); r.ec != std::errc{} || r.ptr != se)
            throw ParseError(lineno, "bad source id '" + std::string(sb, se) + "'");
        if (auto r = std::from_chars(db, de, d); r.ec != std::errc{} || r.ptr != de)
            throw ParseError(lineno, "bad target id '" + std::string(db, de) + "'");

        double w = 1.0;
        if (wb != we) {
            if (!weighted) throw ParseError(lineno, "unexpected weight column");
            std::string tok(wb, we);
            char* wend = nullptr;
            w = std::strtod(tok.c_str(), &wend);
            if (wend != tok.c_str() + tok.size() || !std::isfinite(w))
                throw ParseError(lineno, "bad weight '" + tok + "'");
            if (w < 0.0) throw ParseError(lineno, "negative weight");
        }

        NodeId sd = dense_id(s), dd = dense_id(d);
        arcs.push_back({sd, dd, w});
        if (!directed) arcs.push_back({dd, sd, w});
    }

    NodeId n = NodeId(original_ids.size());
    return {InfluenceGraph(n, std::move(arcs)), std::move(original_ids)};
}

InfluenceGraph normalize_in_weights(const InfluenceGraph& g) {
    std::vector<Arc> arcs;
    arcs.reserve(g.arc_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        double sum = 0.0;
        for (auto [v, w] : g.in_arcs(u)) sum += w;
        if (g.indegree(u) > 0 && sum <= 0.0)
            throw std::invalid_argument("node " + std::to_string(u) +
                                        " has in-arcs but zero total in-weight");
        for (auto [v, w] : g.in_arcs(u))
            if (w > 0.0) arcs.push_back({v, u, w / sum});
    }
    return InfluenceGraph(g.node_count(), std::move(arcs));
}

InfluenceGraph reverse(const InfluenceGraph& g) {
    std::vector<Arc> arcs;
    arcs.reserve(g.arc_count());
    for (const Arc& a : g.arcs()) arcs.push_back({a.dst, a.src, a.weight});
    return normalize_in_weights(InfluenceGraph(g.node_count(), std::move(arcs)));
}

SupernodeResult inject_supernode(const InfluenceGraph& g, const SupernodePolicy& policy) {
    if (policy.kind == SupernodePolicy::Kind::FixedShare &&
        !(policy.beta > 0.0 && policy.beta < 1.0))
        throw std::invalid_argument("fixed-share beta must be in (0,1)");
    if (!g.in_weights_normalized())
        throw std::invalid_argument("inject_supernode requires normalized in-weights");

    NodeId n = g.node_count();
    NodeId s = n;
    std::vector<Arc> arcs;
    arcs.reserve(g.arc_count() + n);
    for (NodeId u = 0; u < n; ++u) {
        NodeId d = g.indegree(u);
        double scale, sw;
        if (d == 0) {
            scale = 0.0;
            sw = 1.0;
        } else if (policy.kind == SupernodePolicy::Kind::UniformRenormalize) {
            scale = double(d) / double(d + 1);
            sw = 1.0 / double(d + 1);
        } else {
            scale = 1.0 - policy.beta;
            sw = policy.beta;
        }
        for (auto [v, w] : g.in_arcs(u)) arcs.push_back({v, u, w * scale});
        arcs.push_back({s, u, sw});
    }
    return {InfluenceGraph(n + 1, std::move(arcs)), s};
}

std::string graph_summary_json(const InfluenceGraph& g) {
    nlohmann::json j{{"nodes", g.node_count()},
                     {"arcs", g.arc_count()},
                     {"max_indegree", g.max_indegree()},
                     {"max_outdegree", g.max_outdegree()},
                     {"dangling_count", g.dangling_count()}};
    return j.dump();
}

}  // namespace recmarket
