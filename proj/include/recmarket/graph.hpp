#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace recmarket {

using NodeId = std::uint32_t;

struct Arc {
    NodeId src;
    NodeId dst;
    double weight;
};

/// Thrown on malformed edge-list input; carries the 1-based line number
/// (0 when the error is not tied to a specific line).
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line > 0 ? "parse error at line " + std::to_string(line) + ": " + what
                                      : "parse error: " + what),
          line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Weighted directed influence graph. An arc (v,u,w) means v influences u
/// with strength w; after normalize_in_weights the weights entering each
/// node with indegree > 0 sum to one. Immutable after construction: all
/// operations return new graphs.
class InfluenceGraph {
  public:
    InfluenceGraph() = default;

    /// Builds from an arc list. Duplicate arcs are merged by summing
    /// weights; negative weights are rejected.
    InfluenceGraph(NodeId node_count, std::vector<Arc> arcs);

    NodeId node_count() const { return node_count_; }
    std::size_t arc_count() const { return in_src_.size(); }

    NodeId indegree(NodeId u) const { return NodeId(in_off_[u + 1] - in_off_[u]); }
    NodeId outdegree(NodeId u) const { return NodeId(out_off_[u + 1] - out_off_[u]); }

    /// In-neighbors of u, i.e. the candidate recommender nodes of u.
    struct InArc {
        NodeId src;
        double weight;
    };
    class InRange {
      public:
        InRange(const InfluenceGraph& g, std::size_t b, std::size_t e) : g_(g), b_(b), e_(e) {}
        class Iter {
          public:
            Iter(const InfluenceGraph& g, std::size_t i) : g_(&g), i_(i) {}
            InArc operator*() const { return {g_->in_src_[i_], g_->in_w_[i_]}; }
            Iter& operator++() { ++i_; return *this; }
            bool operator!=(const Iter& o) const { return i_ != o.i_; }
          private:
            const InfluenceGraph* g_;
            std::size_t i_;
        };
        Iter begin() const { return {g_, b_}; }
        Iter end() const { return {g_, e_}; }
        std::size_t size() const { return e_ - b_; }
      private:
        const InfluenceGraph& g_;
        std::size_t b_, e_;
    };
    InRange in_arcs(NodeId u) const { return {*this, in_off_[u], in_off_[u + 1]}; }

    /// Out-neighbors of u (the users u influences / u's followers).
    const NodeId* out_begin(NodeId u) const { return out_dst_.data() + out_off_[u]; }
    const NodeId* out_end(NodeId u) const { return out_dst_.data() + out_off_[u + 1]; }

    /// All arcs in canonical (dst-major) order.
    std::vector<Arc> arcs() const;

    /// True when every node with indegree > 0 has entering weights summing
    /// to 1 within tol.
    bool in_weights_normalized(double tol = 1e-9) const;

    std::size_t dangling_count() const;
    NodeId max_indegree() const;
    NodeId max_outdegree() const;

    // Raw CSR access for the numeric kernels.
    const std::vector<std::size_t>& in_offsets() const { return in_off_; }
    const std::vector<NodeId>& in_sources() const { return in_src_; }
    const std::vector<double>& in_weights() const { return in_w_; }

  private:
    NodeId node_count_ = 0;
    // in-CSR, indexed by destination node
    std::vector<std::size_t> in_off_;
    std::vector<NodeId> in_src_;
    std::vector<double> in_w_;
    // out-CSR, destinations only
    std::vector<std::size_t> out_off_;
    std::vector<NodeId> out_dst_;
};

struct ParsedGraph {
    InfluenceGraph graph;
    /// original_ids[dense id] = id as it appeared in the input
    std::vector<std::uint64_t> original_ids;
};

/// Reads whitespace-separated "src dst" or "src dst weight" lines;
/// '#'-prefixed lines and blank lines are skipped. Node ids are remapped
/// densely in order of first appearance. Weights stay raw (not normalized);
/// undirected input emits both arc directions.
ParsedGraph parse_edge_list(std::istream& in, bool directed, bool weighted);

/// Scales the entering weights of every node with indegree > 0 to sum
/// to 1. Zero-weight arcs are dropped first; a node left with in-arcs that
/// all have weight zero is degenerate input and throws.
InfluenceGraph normalize_in_weights(const InfluenceGraph& g);

/// Flips every arc and re-normalizes on the new in-sides.
InfluenceGraph reverse(const InfluenceGraph& g);

struct SupernodePolicy {
    enum class Kind { UniformRenormalize, FixedShare };
    Kind kind = Kind::UniformRenormalize;
    double beta = 0.0;  // only for FixedShare, must be in (0,1)

    static SupernodePolicy uniform() { return {Kind::UniformRenormalize, 0.0}; }
    static SupernodePolicy fixed_share(double beta) { return {Kind::FixedShare, beta}; }
};

struct SupernodeResult {
    InfluenceGraph graph;
    NodeId supernode;
};

/// Adds a node pointing to every original node, rebalancing in-weights per
/// the policy. UniformRenormalize treats the new arc as one more in-arc of
/// equal weight (prior weights scale by d/(d+1)); FixedShare gives the
/// supernode in-weight beta everywhere (priors scale by 1-beta). A node
/// that had no in-arcs gets the supernode arc with weight 1 either way.
/// The input must have normalized in-weights.
SupernodeResult inject_supernode(const InfluenceGraph& g, const SupernodePolicy& policy);

/// JSON text {nodes, arcs, max_indegree, max_outdegree, dangling_count}.
std::string graph_summary_json(const InfluenceGraph& g);

}  // namespace recmarket
